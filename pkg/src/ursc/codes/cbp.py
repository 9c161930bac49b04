"""Collision Bound Property checker.

For every number of contenders ``k``, every column ``j`` and every other
column ``j'`` at every cyclic shift ``i``, the checker evaluates

* the weight inequality ``|c_j[0, tau1]| <= alpha * |c_j[tau1, tau2]|`` and
* the collision weight inequality
  ``|(c_j & slipped(c_j'(i)))[tau1, tau2]| <= floor((alpha*W - 1) / (k - 1))``
  where ``W = |c_j[tau1, tau2]|``.

All comparisons are exact integer arithmetic on the numerator/denominator of
``alpha``. The vectorized kernel gets the collision counts for every shift of
a column pair at once as a cyclic cross-correlation computed with real FFTs;
counts are integers far below 2^40, so rounding the float result is exact and
is asserted to be. :func:`check_collision_weight_inequality` is the plain
single-cell form.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple

import numpy as np

from ursc.codeword import interval_weight, rotate, slip, BitVector
from ursc.codes.matrix import CodeMatrix
from ursc.codes.params import ElongationPair, elongation_bounds

# largest allowed distance between an FFT result and the nearest integer
_ROUNDING_SLACK = 0.25


class Inequality(str, enum.Enum):
    WEIGHT = "WeightInequality"
    COLLISION = "CollisionWeightInequality"


class Violation(NamedTuple):
    """One failed cell. Weight-inequality rows carry ``j_prime == i == -1``."""

    k: int
    j: int
    j_prime: int
    i: int
    which: Inequality


@dataclass
class CheckReport:
    passed: bool
    violations: list[Violation] = field(default_factory=list)
    cells_checked: int = 0

    def summary(self) -> str:
        if self.passed:
            return f"CBP holds ({self.cells_checked} cells checked)"
        first = self.violations[0]
        return (
            f"CBP violated: {len(self.violations)} violation(s) listed, first "
            f"k={first.k} j={first.j} j'={first.j_prime} i={first.i} {first.which.value}"
        )


def collision_threshold(alpha: Fraction, lower_weight: int, k: int) -> int:
    """``floor((alpha * W - 1) / (k - 1))``; negative when ``alpha * W < 1``."""
    p, q = alpha.numerator, alpha.denominator
    return (p * lower_weight - q) // (q * (k - 1))


def check_weight_inequality(m: CodeMatrix, j: int, alpha: Fraction, e: ElongationPair) -> bool:
    col = m.columns[j]
    upper = interval_weight(col, 0, e.tau1)
    lower = interval_weight(col, e.tau1, e.tau2)
    return alpha.denominator * upper <= alpha.numerator * lower


def check_collision_weight_inequality(
    m: CodeMatrix,
    j: int,
    j_prime: int,
    i: int,
    k: int,
    alpha: Fraction,
    e: ElongationPair,
) -> bool:
    if j == j_prime:
        raise ValueError("the collision inequality needs two distinct columns")
    if k < 2:
        raise ValueError("k must be at least 2")
    t = m.t
    col = m.columns[j]
    other = m.columns[j_prime]
    hit = BitVector(t, col.value & slip(rotate(other.value, i, t), t))
    lhs = interval_weight(hit, e.tau1, e.tau2)
    w = interval_weight(col, e.tau1, e.tau2)
    return lhs <= collision_threshold(alpha, w, k)


def default_windows(m: CodeMatrix, k_max: int | None = None) -> dict[int, ElongationPair]:
    k_max = m.n if k_max is None else k_max
    return {k: elongation_bounds(m.params, k) for k in range(2, k_max + 1)}


def _window_masks(arr: np.ndarray, windows: list[ElongationPair]) -> np.ndarray:
    """``(n * K, t)`` rows: column j masked to window K, j-major."""
    n, t = arr.shape
    pos = np.arange(t)
    masks = np.stack([(pos >= w.tau1) & (pos <= w.tau2) for w in windows])
    return (arr[:, None, :] * masks[None, :, :]).reshape(n * len(windows), t).astype(np.float64)


def _slipped_rows(arr: np.ndarray) -> np.ndarray:
    return arr | np.roll(arr, 1, axis=1) | np.roll(arr, -1, axis=1)


def _collisions_for_column(args) -> tuple[int, np.ndarray]:
    """Collision counts against shifted copies of one column, for all j and windows.

    ``counts[j * K + w, i] = sum_r wmat[j * K + w, r] * slipped[(r + i) mod t]``.
    Returns ``(j_prime, counts)``.
    """
    j_prime, slipped_col, wmat_f = args
    t = slipped_col.shape[0]
    s_f = np.fft.rfft(slipped_col.astype(np.float64))
    raw = np.fft.irfft(np.conj(wmat_f) * s_f[None, :], n=t)
    out = np.rint(raw)
    if out.size and np.abs(raw - out).max() > _ROUNDING_SLACK:
        raise ArithmeticError("FFT correlation drifted away from integers")
    return j_prime, out.astype(np.int64)


def collision_table(
    m: CodeMatrix, windows: list[ElongationPair], workers: int = 1
) -> np.ndarray:
    """``counts[w, j, j', i]`` = ``|(c_j & slipped(c_j'(i)))[window w]|``.

    Diagonal entries ``j == j'`` are computed too but carry no meaning.
    """
    arr = m.array
    n, t = arr.shape
    wmat_f = np.fft.rfft(_window_masks(arr, windows), axis=1)
    slipped_cols = _slipped_rows(arr)
    jobs = [(jp, slipped_cols[jp], wmat_f) for jp in range(n)]
    if workers > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_collisions_for_column, jobs))
    else:
        results = [_collisions_for_column(job) for job in jobs]
    counts = np.empty((len(windows), n, n, t), dtype=np.int64)
    for jp, out in sorted(results, key=lambda r: r[0]):
        counts[:, :, jp, :] = out.reshape(n, len(windows), t).transpose(1, 0, 2)
    return counts


@dataclass
class CellVerdicts:
    """Per-cell outcomes. ``weight[w, j]``; ``collision[w, j, j', i]`` (diagonal forced True)."""

    k_values: list[int]
    windows: list[ElongationPair]
    weight: np.ndarray
    collision: np.ndarray


def cell_verdicts(
    m: CodeMatrix, alpha: Fraction, windows: dict[int, ElongationPair], workers: int = 1
) -> CellVerdicts:
    alpha = Fraction(alpha)
    p, q = alpha.numerator, alpha.denominator
    k_values = sorted(windows)
    wins = [windows[k] for k in k_values]
    for w in wins:
        w.validate(m.t)
    arr = m.array.astype(np.int64)
    cum = np.concatenate([np.zeros((m.n, 1), dtype=np.int64), np.cumsum(arr, axis=1)], axis=1)
    upper = np.stack([cum[:, w.tau1 + 1] for w in wins])
    lower = np.stack([cum[:, w.tau2 + 1] - cum[:, w.tau1] for w in wins])
    weight_ok = q * upper <= p * lower
    ks = np.array(k_values, dtype=np.int64)[:, None]
    thresholds = (p * lower - q) // (q * (ks - 1))
    counts = collision_table(m, wins, workers)
    collision_ok = counts <= thresholds[:, :, None, None]
    diag = np.arange(m.n)
    collision_ok[:, diag, diag, :] = True
    return CellVerdicts(k_values, wins, weight_ok, collision_ok)


def check_cbp(
    m: CodeMatrix,
    alpha: Fraction,
    e_fn: Callable[[int], ElongationPair] | dict[int, ElongationPair] | None = None,
    *,
    k_values: Iterable[int] | None = None,
    fail_fast: bool = False,
    workers: int = 1,
) -> CheckReport:
    """Evaluate both inequalities on every cell; ``passed`` iff none fails.

    ``e_fn`` maps ``k`` to its window (defaults to the code's own formulas).
    In ``fail_fast`` mode only the lexicographically first violation is kept.
    """
    if k_values is None:
        k_values = range(2, m.n + 1)
    if e_fn is None:
        e_fn = lambda k: elongation_bounds(m.params, k)  # noqa: E731
    lookup = e_fn.__getitem__ if isinstance(e_fn, dict) else e_fn
    windows = {k: lookup(k) for k in k_values}
    if not windows:
        return CheckReport(True, [], 0)
    v = cell_verdicts(m, alpha, windows, workers)
    n, t = m.n, m.t
    cells = len(v.k_values) * n + len(v.k_values) * n * (n - 1) * t
    bad_w = np.argwhere(~v.weight)
    bad_c = np.argwhere(~v.collision)
    if fail_fast:
        cands = []
        if len(bad_w):
            w, j = bad_w[0]
            cands.append(Violation(v.k_values[w], int(j), -1, -1, Inequality.WEIGHT))
        if len(bad_c):
            w, j, jp, i = bad_c[0]
            cands.append(Violation(v.k_values[w], int(j), int(jp), int(i), Inequality.COLLISION))
        # both argwhere results are already in lexicographic order
        viol = sorted(cands)[:1]
    else:
        viol = [Violation(v.k_values[w], int(j), -1, -1, Inequality.WEIGHT) for w, j in bad_w]
        viol += [
            Violation(v.k_values[w], int(j), int(jp), int(i), Inequality.COLLISION)
            for w, j, jp, i in bad_c
        ]
        viol.sort()
    return CheckReport(not viol, viol, cells)
