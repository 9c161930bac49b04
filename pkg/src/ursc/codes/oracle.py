"""Exhaustive definitional verifiers, usable only at desk scale.

``verify_ursc_bruteforce`` walks every subset ``T``, designated member and
combination of cyclic shifts of the other members, and checks the strict
flip-resilient isolation inequality on the prefix ``[0, tau(k)]``.
``verify_classic`` is the aligned, shift-free superimposed code condition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

from ursc.codeword import rotate, slip, window_mask
from ursc.codes.matrix import CodeMatrix


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class UrscWitness:
    k: int
    T: tuple[int, ...]
    designated: int
    shifts: dict[int, int]
    lhs: int
    rhs_threshold: Fraction


@dataclass(frozen=True)
class ClassicWitness:
    T: tuple[int, ...]
    designated: int


def bruteforce_configurations(n: int, t: int, k_max: int) -> int:
    return sum(comb(n, k) * k * t ** (k - 1) for k in range(2, k_max + 1))


def verify_ursc_bruteforce(
    m: CodeMatrix,
    alpha: Fraction,
    tau_fn: Callable[[int], int],
    k_max: int | None = None,
    budget: int | None = None,
) -> UrscWitness | None:
    """Return ``None`` if the matrix is a URSC for ``2 <= k <= k_max``, else the first witness.

    Witness order is lexicographic in ``(k, T, designated, shifts)`` with ``T``
    in :func:`itertools.combinations` order and shifts listed for the other
    members of ``T`` in increasing column order.
    """
    alpha = Fraction(alpha)
    n, t = m.n, m.t
    k_max = n if k_max is None else k_max
    if not 2 <= k_max <= n:
        raise ValueError(f"k_max must lie in [2, {n}]")
    if budget is not None:
        total = bruteforce_configurations(n, t, k_max)
        if total > budget:
            raise BudgetExceeded(f"{total} configurations exceed the budget of {budget}")
    p, q = alpha.numerator, alpha.denominator
    cols = [c.value for c in m.columns]
    slipped_shifts = [[slip(rotate(c, i, t), t) for i in range(t)] for c in cols]

    for k in range(2, k_max + 1):
        tau = tau_fn(k)
        if not 0 <= tau < t:
            raise ValueError(f"tau({k}) = {tau} outside [0, {t})")
        prefix = window_mask(0, tau)
        for T in itertools.combinations(range(n), k):
            for j in T:
                target = cols[j] & prefix
                w = target.bit_count()
                others = [x for x in T if x != j]
                # distinct covered subsets of the target reachable per member
                reach = [{s & target for s in slipped_shifts[x]} for x in others]
                covered = {0}
                for opts in reach:
                    covered = {a | b for a in covered for b in opts}
                best = max(c.bit_count() for c in covered)
                if q * best < p * w:
                    continue
                return _first_witness(k, T, j, others, target, w, alpha, slipped_shifts, t)
    return None


def _first_witness(k, T, j, others, target, w, alpha, slipped_shifts, t) -> UrscWitness:
    p, q = alpha.numerator, alpha.denominator
    for shifts in itertools.product(range(t), repeat=len(others)):
        z = 0
        for x, i in zip(others, shifts):
            z |= slipped_shifts[x][i]
        lhs = (target & z).bit_count()
        if q * lhs >= p * w:
            return UrscWitness(k, T, j, dict(zip(others, shifts)), lhs, alpha * w)
    raise AssertionError("covering found by the set search but not by enumeration")


def verify_classic(m: CodeMatrix, k: int, budget: int | None = None) -> ClassicWitness | None:
    """Aligned check: every member of every k-subset owns a row where the rest are 0."""
    n = m.n
    if not 2 <= k <= n:
        raise ValueError(f"k must lie in [2, {n}]")
    if budget is not None and comb(n, k) * k > budget:
        raise BudgetExceeded(f"{comb(n, k) * k} configurations exceed the budget of {budget}")
    cols = [c.value for c in m.columns]
    for T in itertools.combinations(range(n), k):
        for j in T:
            rest = 0
            for x in T:
                if x != j:
                    rest |= cols[x]
            if not cols[j] & ~rest:
                return ClassicWitness(T, j)
    return None
