"""Las Vegas construction: sample, check, repeat."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from ursc.codes.cbp import CheckReport, check_cbp
from ursc.codes.matrix import CodeMatrix, sample_matrix
from ursc.codes.params import ConstructionParams, elongation_bounds, max_supported_k

log = logging.getLogger(__name__)


class IterationsExhausted(RuntimeError):
    def __init__(self, iterations: int, last_report: CheckReport):
        super().__init__(f"no matrix passed after {iterations} iteration(s); {last_report.summary()}")
        self.iterations = iterations
        self.last_report = last_report


@dataclass
class Construction:
    matrix: CodeMatrix
    iterations: int
    k_max: int


def _run(params: ConstructionParams, max_iters: int, k_max: int, workers: int) -> Construction:
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    if params.seed is None:
        raise ValueError("construction needs a seed")
    report = None
    for it in range(max_iters):
        m = sample_matrix(params.with_seed(params.seed + it))
        report = check_cbp(
            m,
            params.alpha,
            lambda k: elongation_bounds(m.params, k),
            k_values=range(2, k_max + 1),
            fail_fast=True,
            workers=workers,
        )
        log.debug("iteration %d: %s", it + 1, report.summary())
        if report.passed:
            return Construction(m, it + 1, k_max)
    raise IterationsExhausted(max_iters, report)


def construct_ursc(params: ConstructionParams, max_iters: int, workers: int = 1) -> Construction:
    """Sample matrices until one satisfies the Collision Bound Property for all k <= n.

    Iteration ``i`` (0-based) samples with seed ``params.seed + i``; the
    returned matrix records the seed it was drawn from.
    """
    return _run(params.with_length(None), max_iters, params.n, workers)


def construct_ursc_with_length(
    params: ConstructionParams, t_target: int, max_iters: int, workers: int = 1
) -> Construction:
    """Same loop at a fixed code length, checking only ``2 <= k <= delta``."""
    delta = max_supported_k(params, t_target)
    return _run(params.with_length(t_target), max_iters, delta, workers)
