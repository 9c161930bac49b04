"""Local broadcast: each node spreads a bit-string message to its neighbors.

A message is cut into ``w``-bit chunks. Chunk ``i`` travels as the extended
message ``sender bits | first flag | chunk`` of ``2w + 1`` bits, read as an
integer plus one to give an id in a universe of ``2^(2w+1)`` ids. In its
``r``-th period a node beeps with the column and block ID of chunk
``r mod m`` instead of its own id.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ursc.beeping.blockid import block_id, block_length, decode_table, expand_codeword, id_width
from ursc.beeping.network import (
    CodeTooShort,
    Event,
    Graph,
    NodeRuntime,
    SafetyViolation,
    WakeSchedule,
    run_rounds,
    supported_k,
)
from ursc.codes.matrix import CodeMatrix


@dataclass(frozen=True)
class ExtendedMessage:
    sender: int
    first: bool
    chunk: str
    width: int

    def __post_init__(self) -> None:
        if len(self.chunk) != self.width or set(self.chunk) - {"0", "1"}:
            raise ValueError(f"chunk must be {self.width} bits, got {self.chunk!r}")
        if not 0 <= self.sender - 1 < 1 << self.width:
            raise ValueError(f"sender {self.sender} does not fit in {self.width} bits")

    @property
    def sender_bits(self) -> str:
        return format(self.sender - 1, f"0{self.width}b") if self.width else ""

    @property
    def bits(self) -> str:
        return self.sender_bits + ("1" if self.first else "0") + self.chunk

    @property
    def id(self) -> int:
        return int(self.bits, 2) + 1

    @classmethod
    def from_id(cls, ext_id: int, n: int) -> ExtendedMessage:
        w = id_width(n)
        if not 1 <= ext_id <= universe(n):
            raise ValueError(f"extended id {ext_id} outside [1, {universe(n)}]")
        bits = format(ext_id - 1, f"0{2 * w + 1}b")
        sender = int(bits[:w], 2) + 1 if w else 1
        return cls(sender, bits[w] == "1", bits[w + 1 :], w)


def universe(n: int) -> int:
    """Number of distinct extended messages for an id universe of size ``n``."""
    return 1 << (2 * id_width(n) + 1)


def extended_messages(v: int, message: str, n: int) -> list[ExtendedMessage]:
    if not message or set(message) - {"0", "1"}:
        raise ValueError(f"message must be a nonempty bit string, got {message!r}")
    if not 1 <= v <= n:
        raise ValueError(f"id {v} outside [1, {n}]")
    w = id_width(n)
    if w == 0:
        raise ValueError("a one-id universe leaves no room for payload bits")
    count = -(-len(message) // w)
    padded = message.ljust(count * w, "0")
    return [ExtendedMessage(v, i == 0, padded[i * w : (i + 1) * w], w) for i in range(count)]


def reassemble_message(chunks: list[ExtendedMessage]) -> str | None:
    """Payloads from the first flagged chunk up to the next flagged one.

    Returns ``None`` while no flagged chunk has been seen or the cycle has
    not closed yet.
    """
    if len({c.sender for c in chunks}) > 1:
        raise ValueError("chunks come from more than one sender")
    starts = [i for i, c in enumerate(chunks) if c.first]
    if len(starts) < 2:
        return None
    return "".join(c.chunk for c in chunks[starts[0] : starts[1]])


@dataclass
class BroadcastOutcome:
    messages: dict[int, dict[int, str]]
    incomplete: dict[int, set[int]]
    chunks: dict[int, dict[int, list[ExtendedMessage]]] = field(default_factory=dict)
    events: list[Event] = field(default_factory=list)


def simulate_local_broadcast(
    g: Graph,
    sched: WakeSchedule,
    code: CodeMatrix,
    messages: dict[int, str],
    horizon: int,
    *,
    check_length: bool = True,
) -> BroadcastOutcome:
    """Run local broadcast for ``horizon`` rounds.

    A receiver appends a decoded chunk to its per-sender list when it
    differs from the last one appended, or when at least one period has
    passed since that last append. Two equal consecutive chunks of a message
    decoded less than a period apart therefore merge into one; messages whose
    consecutive chunks differ are always reassembled exactly.
    """
    sched.covers(g)
    n = g.n_ids
    big = universe(n)
    if code.n < big:
        raise CodeTooShort(f"code has {code.n} columns but {big} extended ids are needed")
    if check_length and supported_k(code) < g.max_degree:
        raise CodeTooShort(f"code supports k <= {supported_k(code)}, graph degree is {g.max_degree}")
    missing = g.nodes - messages.keys()
    if missing:
        raise ValueError(f"no message for nodes {sorted(missing)}")

    lb = block_length(big)
    period = code.t * lb
    table = decode_table(big)
    patterns = {}
    for v in g.nodes:
        ids = [m.id for m in extended_messages(v, messages[v], n)]
        patterns[v] = [expand_codeword(code.columns[e - 1], block_id(e, big)).value for e in ids]
    runtimes = {v: NodeRuntime(v, code.columns[v - 1], bytearray(period)) for v in g.nodes}
    nbrs = {v: g.neighbors(v) for v in g.nodes}
    lists: dict[int, dict[int, list[ExtendedMessage]]] = {v: {} for v in g.nodes}
    last_append: dict[tuple[int, int], int] = {}
    done: dict[int, dict[int, str]] = {v: {} for v in g.nodes}
    events = [Event(r, v, "wake", "") for v, r in sched.wake.items() if v in g.nodes]

    def on_window(rnd: int, rt: NodeRuntime, value: int) -> None:
        e = table.get(value)
        if e is None:
            return
        msg = ExtendedMessage.from_id(e, n)
        u = msg.sender
        if u == rt.id:
            return
        if u not in nbrs[rt.id]:
            raise SafetyViolation(rnd, rt.id, u)
        if u in done[rt.id]:
            return
        got = lists[rt.id].setdefault(u, [])
        key = (rt.id, u)
        if got and got[-1] == msg and rnd - last_append[key] < period:
            return
        got.append(msg)
        last_append[key] = rnd
        events.append(Event(rnd, rt.id, "chunk", f"{u}:{msg.bits}"))
        full = reassemble_message(got)
        if full is not None:
            done[rt.id][u] = full
            events.append(Event(rnd, rt.id, "message", f"{u}:{full}"))

    run_rounds(g, sched, horizon, patterns, period, lb, on_window, runtimes)
    incomplete = {v: set(nbrs[v]) - done[v].keys() for v in sorted(g.nodes)}
    events.sort(key=lambda e: (e.round, e.node, e.event != "wake", e.arg))
    return BroadcastOutcome(
        {v: dict(sorted(done[v].items())) for v in sorted(g.nodes)}, incomplete, lists, events
    )
