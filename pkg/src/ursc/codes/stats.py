"""Monte-Carlo estimates of segment weights and pairwise collision counts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ursc.codes.matrix import rng_for, row_probabilities
from ursc.codes.params import ConstructionParams, elongation_bounds


@dataclass(frozen=True)
class SegmentStats:
    trials: int
    mean_upper: Fraction
    mean_lower: Fraction
    mean_collision: Fraction


def empirical_segment_stats(
    params: ConstructionParams,
    k: int,
    shift: int,
    trials: int,
    seed: int = 0,
    chunk: int = 2048,
) -> SegmentStats:
    """Average upper/lower segment weights of a fresh column and its collision
    count against the slipped ``shift``-th rotation of a second fresh column.

    Only the rows that enter the three statistics are drawn; every row is an
    independent Bernoulli variable, so this matches sampling whole columns.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    e = elongation_bounds(params, k)
    t = params.t
    p = row_probabilities(params)
    head = p[: e.tau2 + 1]
    lower_rows = np.arange(e.tau1, e.tau2 + 1)
    # rows of the second column seen by the slipped window at this shift
    needed = (lower_rows[:, None] + shift + np.array([-1, 0, 1])[None, :]) % t
    uniq, inverse = np.unique(needed, return_inverse=True)
    inverse = inverse.reshape(needed.shape)
    q_rows = p[uniq]

    rng = rng_for(seed)
    up_total = lo_total = col_total = 0
    done = 0
    while done < trials:
        b = min(chunk, trials - done)
        first = rng.random((b, head.size)) < head
        second = rng.random((b, q_rows.size)) < q_rows
        slipped = second[:, inverse].any(axis=2)
        lower = first[:, e.tau1 :]
        up_total += int(first[:, : e.tau1 + 1].sum())
        lo_total += int(lower.sum())
        col_total += int((lower & slipped).sum())
        done += b
    return SegmentStats(
        trials,
        Fraction(up_total, trials),
        Fraction(lo_total, trials),
        Fraction(col_total, trials),
    )


def upper_weight_interval(params: ConstructionParams, k: int) -> tuple[float, float]:
    """Open interval bounding the expected upper-segment weight."""
    base = math.sqrt(float(params.c)) * k * math.log(params.n)
    return base / 8, base / 2


def lower_weight_interval(params: ConstructionParams, k: int) -> tuple[float, float]:
    """Open interval bounding the expected lower-segment weight."""
    base = math.sqrt(float(params.c)) * k * math.log(params.n)
    inv = 1.0 / float(params.alpha) ** (1 + float(params.eps) / 2)
    return (inv - 1 / 8) * base, 4 * inv * base


def weight_floor_prediction(params: ConstructionParams) -> float:
    """High-probability lower bound on the minimum lower-segment weight at k = n."""
    return 0.6 * math.sqrt(float(params.c)) * params.n * math.log(params.n)
