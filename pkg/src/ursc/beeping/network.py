"""Synchronous beeping network running the block-ID neighborhood learning loop.

Every node owns one column of a code matrix. While awake it repeats a
period of ``t * (7 + 2w)`` rounds: in block ``i`` it beeps its block ID if
bit ``i`` of its column is 1 and stays silent otherwise. A node records 1
for a round when it beeped or any neighbor beeped, and after each record it
compares the trailing window of its record (read cyclically, the record is
zeroed at the start of every period) against all block IDs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple

from ursc.beeping.blockid import block_id, block_length, decode_table, expand_codeword
from ursc.codeword import BitVector
from ursc.codes.matrix import CodeMatrix
from ursc.codes.params import NoSupportedK, max_supported_k


class CodeTooShort(ValueError):
    pass


class SafetyViolation(AssertionError):
    def __init__(self, round_: int, node: int, logged: int):
        super().__init__(f"node {node} decoded non-neighbor {logged} at round {round_}")
        self.round = round_
        self.node = node
        self.logged = logged


@dataclass(frozen=True)
class Graph:
    n_ids: int
    nodes: frozenset[int]
    edges: frozenset[tuple[int, int]]

    def __init__(self, n_ids: int, nodes: Iterable[int], edges: Iterable[Iterable[int]] = ()):
        nodes = frozenset(nodes)
        canon = set()
        for e in edges:
            a, b = e
            if a == b:
                raise ValueError(f"self-loop at {a}")
            if a not in nodes or b not in nodes:
                raise ValueError(f"edge {a}-{b} uses an unknown node")
            pair = (min(a, b), max(a, b))
            if pair in canon:
                raise ValueError(f"duplicate edge {a}-{b}")
            canon.add(pair)
        if any(not 1 <= v <= n_ids for v in nodes):
            raise ValueError(f"node ids must lie in [1, {n_ids}]")
        object.__setattr__(self, "n_ids", n_ids)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", frozenset(canon))

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(b if a == v else a for a, b in self.edges if v in (a, b))

    @property
    def max_degree(self) -> int:
        return max((len(self.neighbors(v)) for v in self.nodes), default=0)

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        seen = set()
        todo = [min(self.nodes)]
        while todo:
            v = todo.pop()
            if v not in seen:
                seen.add(v)
                todo.extend(self.neighbors(v) - seen)
        return seen == self.nodes


@dataclass(frozen=True)
class WakeSchedule:
    wake: dict[int, int]

    def __post_init__(self) -> None:
        if any(r < 0 for r in self.wake.values()):
            raise ValueError("wake rounds must be nonnegative")

    def covers(self, g: Graph) -> None:
        missing = g.nodes - self.wake.keys()
        if missing:
            raise ValueError(f"no wake round for nodes {sorted(missing)}")


class Event(NamedTuple):
    round: int
    node: int
    event: str
    arg: str

    def line(self) -> str:
        return f"{self.round},{self.node},{self.event},{self.arg}"


@dataclass
class NodeRuntime:
    id: int
    codeword: BitVector
    sigma: bytearray
    learned: set[int] = field(default_factory=set)
    local_clock: int = 0


def supported_k(code: CodeMatrix) -> int:
    try:
        return max_supported_k(code.params, code.t)
    except NoSupportedK:
        return 1


def require_support(code: CodeMatrix, g: Graph, n_ids: int) -> None:
    if code.n < n_ids:
        raise CodeTooShort(f"code has {code.n} columns but the id universe is {n_ids}")
    k = supported_k(code)
    if k < g.max_degree:
        raise CodeTooShort(f"code supports k <= {k} but the graph has degree {g.max_degree}")


def run_rounds(
    g: Graph,
    sched: WakeSchedule,
    horizon: int,
    patterns: dict[int, list[int]],
    period: int,
    window: int,
    on_window: Callable[[int, NodeRuntime, int], None],
    runtimes: dict[int, NodeRuntime],
) -> None:
    """Round loop shared by the learning and broadcast protocols.

    ``patterns[v][r]`` is the beep pattern (bit ``x`` = local round ``x`` of
    the period) used in the ``r``-th repetition, taken cyclically.
    ``on_window(round, runtime, value)`` receives the trailing record window
    as an integer whose bit ``j`` is the ``j``-th oldest entry.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    order = sorted(g.nodes)
    nbrs = {v: sorted(g.neighbors(v)) for v in order}
    for rnd in range(horizon):
        beeps: dict[int, int] = {}
        for v in order:
            lam = rnd - sched.wake[v]
            if lam >= 0:
                rep, pos = divmod(lam, period)
                pat = patterns[v]
                beeps[v] = pat[rep % len(pat)] >> pos & 1
        for v in order:
            if v not in beeps:
                continue
            rt = runtimes[v]
            rt.local_clock = rnd - sched.wake[v]
            pos = rt.local_clock % period
            if pos == 0:
                rt.sigma[:] = bytes(period)
            heard = beeps[v] or any(beeps.get(u, 0) for u in nbrs[v])
            rt.sigma[pos] = 1 if heard else 0
            value = 0
            for j in range(window):
                if rt.sigma[(pos - window + 1 + j) % period]:
                    value |= 1 << j
            on_window(rnd, rt, value)


def simulate_neighborhood_learning(
    g: Graph,
    sched: WakeSchedule,
    code: CodeMatrix,
    horizon: int,
    *,
    check_length: bool = True,
) -> dict[int, list[tuple[int, int]]]:
    """Run the learning loop for ``horizon`` global rounds.

    Returns, per node, the ``(round, id)`` pairs at which new neighbors were
    first decoded. A node ignores its own block ID. Decoding a non-neighbor
    raises :class:`SafetyViolation`.
    """
    sched.covers(g)
    n = g.n_ids
    if check_length:
        require_support(code, g, n)
    elif code.n < n:
        raise CodeTooShort(f"code has {code.n} columns but the id universe is {n}")
    lb = block_length(n)
    period = code.t * lb
    table = decode_table(n)
    patterns = {
        v: [expand_codeword(code.columns[v - 1], block_id(v, n)).value] for v in g.nodes
    }
    runtimes = {v: NodeRuntime(v, code.columns[v - 1], bytearray(period)) for v in g.nodes}
    found: dict[int, list[tuple[int, int]]] = {v: [] for v in sorted(g.nodes)}
    nbrs = {v: g.neighbors(v) for v in g.nodes}

    def on_window(rnd: int, rt: NodeRuntime, value: int) -> None:
        u = table.get(value)
        if u is None or u == rt.id or u in rt.learned:
            return
        if u not in nbrs[rt.id]:
            raise SafetyViolation(rnd, rt.id, u)
        rt.learned.add(u)
        found[rt.id].append((rnd, u))

    run_rounds(g, sched, horizon, patterns, period, lb, on_window, runtimes)
    return found


def learning_events(sched: WakeSchedule, found: dict[int, list[tuple[int, int]]]) -> list[Event]:
    events = [Event(r, v, "wake", "") for v, r in sched.wake.items()]
    events += [Event(r, v, "learn", str(u)) for v, lst in found.items() for r, u in lst]
    return sorted(events, key=lambda e: (e.round, e.node, e.event != "wake", e.arg))


def discovery_rounds(
    g: Graph, sched: WakeSchedule, found: dict[int, list[tuple[int, int]]]
) -> dict[tuple[int, int], int | None]:
    """Rounds after mutual wake at which ``v`` learned ``u``, per directed edge."""
    out = {}
    for a, b in sorted(g.edges):
        for v, u in ((a, b), (b, a)):
            mutual = max(sched.wake[v], sched.wake[u])
            hit = next((r for r, x in found.get(v, []) if x == u), None)
            out[(v, u)] = None if hit is None else hit - mutual
    return out


def connected_graphs(n_ids: int, max_nodes: int) -> list[Graph]:
    """Every connected labeled graph whose node set is drawn from ``1..n_ids``."""
    out = []
    for size in range(1, max_nodes + 1):
        for nodes in itertools.combinations(range(1, n_ids + 1), size):
            pairs = list(itertools.combinations(nodes, 2))
            for mask in range(1 << len(pairs)):
                edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
                gr = Graph(n_ids, nodes, edges)
                if gr.is_connected():
                    out.append(gr)
    return out
