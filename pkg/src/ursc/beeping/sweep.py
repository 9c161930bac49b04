"""Exhaustive Safety/Inclusion sweep over wake offsets, without enumerating them.

Fix a receiver ``v`` and its neighbor set ``S``. What ``v`` decodes at global
round ``g`` depends only on the local clocks ``g - o_u`` of the nodes of
``{v} | S``. With every offset free in ``[0, P)`` those local clocks range
independently over ``(g - P, g]``, so the set of windows ``v`` can see at
round ``g`` is the OR-product of small per-node value sets. That set only
changes while the nodes are still waking up, which makes the Safety sweep
over all ``P^|N[v]|`` schedules cheap and exact.

For Inclusion of a neighbor ``w`` the sweep fixes the relative offset ``d``
of ``w`` and reduces the remaining neighbors to signatures: the window each
one contributes at every round where ``v`` could still decode ``w``. Two
offsets with equal signatures behave identically, so checking signature
combinations (and then whether a combination is realizable with all offsets
inside one period) decides every schedule exactly.

A window only decodes when it lies inside one period of the receiver (the
record is zeroed at period start and every block ID starts with a 1), so
windows that reach back across a period boundary are skipped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ursc.beeping.blockid import block_id, block_length, expand_codeword
from ursc.beeping.network import Graph, connected_graphs, supported_k
from ursc.codes.matrix import CodeMatrix


@dataclass(frozen=True)
class SafetyWitness:
    receiver: int
    neighbors: tuple[int, ...]
    logged: int
    offsets: dict[int, int]
    round: int


@dataclass(frozen=True)
class InclusionFailure:
    receiver: int
    neighbor: int
    neighbors: tuple[int, ...]
    offsets: dict[int, int]


@dataclass
class SweepReport:
    period: int
    graphs: int
    inclusion_graphs: int
    safety: list[SafetyWitness] = field(default_factory=list)
    inclusion: list[InclusionFailure] = field(default_factory=list)
    failing_graphs: list[Graph] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.safety and not self.inclusion


class _Streams:
    """Windows of every node's beep stream, indexed by local clock."""

    def __init__(self, code: CodeMatrix, n_ids: int, periods: int):
        self.n = n_ids
        self.lb = block_length(n_ids)
        self.P = code.t * self.lb
        self.lo = -self.P
        hi = (periods + 1) * self.P
        self.windows: dict[int, np.ndarray] = {}
        for v in range(1, n_ids + 1):
            bits = expand_codeword(code.columns[v - 1], block_id(v, n_ids))
            pat = np.array(list(bits), dtype=np.int64)
            x = np.arange(self.lo - self.lb + 1, hi)
            stream = np.where(x >= 0, pat[np.mod(x, self.P)], 0)
            win = np.zeros(hi - self.lo, dtype=np.int64)
            for j in range(self.lb):
                win |= stream[j : j + hi - self.lo] << j
            self.windows[v] = win
        table = np.zeros(1 << self.lb, dtype=np.int64)
        for v in range(1, n_ids + 1):
            table[block_id(v, n_ids).value] = v
        self.decode = table

    def at(self, v: int, clock) -> np.ndarray:
        return self.windows[v][np.asarray(clock) - self.lo]


def _or_product(sets: list[np.ndarray]) -> np.ndarray:
    acc = np.zeros(1, dtype=np.int64)
    for s in sets:
        acc = np.unique((acc[:, None] | s[None, :]).ravel())
    return acc


def _decompose(target: int, sets: list[np.ndarray]) -> list[int]:
    """Pick one value per set whose OR is ``target``."""
    pools = [[int(x) for x in s if int(x) & ~target == 0] for s in sets]
    for combo in itertools.product(*pools):
        acc = 0
        for x in combo:
            acc |= x
        if acc == target:
            return list(combo)
    raise AssertionError("target not reachable")


def safety_for_receiver(
    st: _Streams,
    v: int,
    nbrs: tuple[int, ...],
    horizon: int,
    allowed: tuple[int, ...] | None = None,
) -> SafetyWitness | None:
    """First round (and a schedule) at which ``v`` decodes an id outside
    ``allowed`` (by default its neighbors)."""
    P, lb = st.P, st.lb
    allowed = np.array(sorted(set(nbrs if allowed is None else allowed) | {v}), dtype=np.int64)
    last_key = None
    # past P + lb every per-node set is the full periodic set
    for g in range(min(horizon, P + lb + 1)):
        lam = np.arange(max(0, g - P + 1), g + 1)
        lam = lam[lam % P >= lb - 1]
        own = np.unique(st.at(v, lam))
        mu = np.arange(g - P + 1, g + 1)
        others = [np.unique(st.at(u, mu)) for u in nbrs]
        key = (own.tobytes(), tuple(o.tobytes() for o in others))
        if key == last_key or own.size == 0:
            continue
        last_key = key
        comb = _or_product(others)
        seen = (own[:, None] | comb[None, :]).ravel()
        ids = st.decode[seen]
        bad = (ids != 0) & ~np.isin(ids, allowed)
        if not bad.any():
            continue
        value = int(seen[np.argmax(bad)])
        parts = _decompose(value, [own] + others)
        offsets = {v: g - int(lam[np.argmax(st.at(v, lam) == parts[0])])}
        for u, val in zip(nbrs, parts[1:]):
            offsets[u] = g - int(mu[np.argmax(st.at(u, mu) == val)])
        return SafetyWitness(v, nbrs, int(st.decode[value]), offsets, g)
    return None


def _fits(lo: int, hi: int, r: int, P: int) -> bool:
    return max(hi, r) - min(lo, r) <= P - 1


def inclusion_for_pair(
    st: _Streams, v: int, w: int, nbrs: tuple[int, ...], limit: int = 1
) -> list[InclusionFailure]:
    """Schedules under which ``v`` has not decoded ``w`` within ``2P`` rounds of mutual wake."""
    P, lb = st.P, st.lb
    rest = tuple(u for u in nbrs if u != w)
    if len(rest) > 2:
        raise NotImplementedError("inclusion sweep handles receivers of degree <= 3")
    b = block_id(w, st.n).value
    full = np.arange(0, 3 * P)
    valid_all = full % P >= lb - 1
    own_all = st.at(v, full)

    # which "missing bits" the other neighbors could jointly supply
    fills = []
    for u in rest:
        vals = np.unique(st.windows[u])
        fills.append(vals[(vals & ~b) == 0])
    q = _or_product(fills)
    x = np.arange(1 << lb, dtype=np.int64)
    coverable = np.zeros(1 << lb, dtype=bool)
    for val in q:
        coverable |= (x & ~int(val)) == 0

    failures: list[InclusionFailure] = []
    r_all = np.arange(-P + 1, P)
    for d in range(-P + 1, P):
        lo, hi = min(0, d), max(0, d)
        end = hi + 2 * P
        lam = full[:end]
        base = own_all[:end] | st.at(w, lam - d)
        need = b & ~base
        cand = valid_all[:end] & ((base & ~b) == 0) & coverable[need]
        lam_c = lam[cand]
        base_c = base[cand]
        if not rest:
            if not (base_c == b).any():
                failures.append(_failure(v, w, nbrs, {w: d}))
        elif len(rest) == 1:
            (u,) = rest
            vals = st.at(u, lam_c[None, :] - r_all[:, None])
            ok = ((vals | base_c[None, :]) == b).any(axis=1)
            for r in r_all[~ok]:
                if _fits(lo, hi, int(r), P):
                    failures.append(_failure(v, w, nbrs, {w: d, u: int(r)}))
                    break
        else:
            u2, u3 = rest
            v2 = st.at(u2, lam_c[None, :] - r_all[:, None])
            v3 = st.at(u3, lam_c[None, :] - r_all[:, None])
            first2, inv2 = _row_classes(v2, b)
            first3, inv3 = _row_classes(v3, b)
            s2, s3 = v2[first2], v3[first3]
            ok = ((s2[:, None, :] | s3[None, :, :] | base_c[None, None, :]) == b).any(axis=2)
            for i, j in zip(*np.nonzero(~ok)):
                hit = _realize(r_all[inv2 == i], r_all[inv3 == j], lo, hi, P)
                if hit is not None:
                    failures.append(_failure(v, w, nbrs, {w: d, u2: hit[0], u3: hit[1]}))
                    break
        if len(failures) >= limit:
            break
    return failures


def _row_classes(vals: np.ndarray, b: int) -> tuple[np.ndarray, np.ndarray]:
    """Group rows that act identically against block ID ``b``.

    Only the bits of ``b`` matter in a window that stays inside ``b``; any
    window with a bit outside ``b`` blocks the decode whatever else happens.
    Rows are compressed to those bits plus a blocking flag and packed into
    integer keys. Returns the first row of every class and each row's class.
    """
    bit_pos = [i for i in range(b.bit_length()) if b >> i & 1]
    width = len(bit_pos) + 1
    code = np.zeros(vals.shape, dtype=np.int64)
    for k, i in enumerate(bit_pos):
        code |= (vals >> i & 1) << k
    code[(vals & ~b) != 0] = 1 << len(bit_pos)
    per_word = 63 // width
    words = []
    for start in range(0, max(1, vals.shape[1]), per_word):
        block = code[:, start : start + per_word]
        key = np.zeros(vals.shape[0], dtype=np.int64)
        for j in range(block.shape[1]):
            key |= block[:, j] << (j * width)
        words.append(key)
    if len(words) == 1:
        _, first, inv = np.unique(words[0], return_index=True, return_inverse=True)
    else:
        _, first, inv = np.unique(np.stack(words, axis=1), axis=0, return_index=True, return_inverse=True)
    return first, inv.ravel()


def _realize(r2s: np.ndarray, r3s: np.ndarray, lo: int, hi: int, P: int) -> tuple[int, int] | None:
    r3s = np.sort(r3s)
    for r2 in r2s:
        r2 = int(r2)
        if not _fits(lo, hi, r2, P):
            continue
        a = max(hi, r2) - P + 1
        z = min(lo, r2) + P - 1
        k = np.searchsorted(r3s, a)
        if k < len(r3s) and r3s[k] <= z:
            return r2, int(r3s[k])
    return None


def _failure(v: int, w: int, nbrs: tuple[int, ...], rel: dict[int, int]) -> InclusionFailure:
    shift = -min(0, *rel.values())
    offsets = {v: shift} | {u: r + shift for u, r in rel.items()}
    return InclusionFailure(v, w, nbrs, offsets)


def exhaustive_sweep(
    code: CodeMatrix,
    n_ids: int,
    max_nodes: int = 4,
    horizon_periods: int = 3,
    graphs: list[Graph] | None = None,
    *,
    all_inclusion: bool = False,
) -> SweepReport:
    """Safety for every connected graph on at most ``max_nodes`` nodes, and
    Inclusion for those whose degree the code supports with room for one more
    contender (every graph with ``all_inclusion``), over every wake offset in
    ``[0, P)`` per node."""
    st = _Streams(code, n_ids, horizon_periods)
    graphs = connected_graphs(n_ids, max_nodes) if graphs is None else graphs
    k = supported_k(code)
    horizon = horizon_periods * st.P
    safety_memo: dict[tuple, SafetyWitness | None] = {}
    incl_memo: dict[tuple, list[InclusionFailure]] = {}
    report = SweepReport(st.P, len(graphs), 0)
    for gr in graphs:
        bad = False
        check_incl = all_inclusion or k >= gr.max_degree + 1
        report.inclusion_graphs += check_incl
        for v in sorted(gr.nodes):
            nbrs = tuple(sorted(gr.neighbors(v)))
            key = (v, nbrs)
            if key not in safety_memo:
                safety_memo[key] = safety_for_receiver(st, v, nbrs, horizon)
                if safety_memo[key] is not None:
                    report.safety.append(safety_memo[key])
            bad |= safety_memo[key] is not None
            if not check_incl:
                continue
            for w in nbrs:
                ikey = (v, w, nbrs)
                if ikey not in incl_memo:
                    incl_memo[ikey] = inclusion_for_pair(st, v, w, nbrs)
                    report.inclusion.extend(incl_memo[ikey])
                bad |= bool(incl_memo[ikey])
        if bad:
            report.failing_graphs.append(gr)
    return report
