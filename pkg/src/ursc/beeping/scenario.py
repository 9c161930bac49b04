"""JSON scenario files for the beeping simulators.

``{"nodes": [...], "edges": [[a, b], ...], "wake": {"id": round}, "horizon": int,
"code_file": "path", "messages": {"id": "hex"}, "n_ids": int}``

``messages`` and ``n_ids`` are optional. A message is a hex string, four bits
per digit, most significant first; a ``bits:`` prefix gives raw 0/1 digits
instead. Without ``n_ids`` the id universe is the code's column count for
neighborhood learning and the largest node id for local broadcast.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ursc.beeping.network import Graph, WakeSchedule


@dataclass
class BeepScenario:
    nodes: list[int]
    edges: list[tuple[int, int]]
    wake: dict[int, int]
    horizon: int
    code_file: str
    messages: dict[int, str] | None
    n_ids: int | None

    def graph(self, n_ids: int) -> Graph:
        return Graph(n_ids, self.nodes, self.edges)

    def schedule(self) -> WakeSchedule:
        return WakeSchedule(dict(self.wake))


def decode_message(text: str) -> str:
    if text.startswith("bits:"):
        bits = text[5:]
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"bad bit message {text!r}")
        return bits
    try:
        value = int(text, 16)
    except ValueError as exc:
        raise ValueError(f"bad hex message {text!r}") from exc
    if not text or text.startswith(("-", "+", "0x", "0X")):
        raise ValueError(f"bad hex message {text!r}")
    return format(value, f"0{4 * len(text)}b")


def load_scenario(path: str | Path) -> BeepScenario:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
        nodes = [int(v) for v in data["nodes"]]
        edges = [(int(a), int(b)) for a, b in data.get("edges", [])]
        wake = {int(k): int(v) for k, v in data["wake"].items()}
        horizon = int(data["horizon"])
        code_file = str((path.parent / data["code_file"]).resolve())
        raw = data.get("messages")
        messages = None if raw is None else {int(k): decode_message(v) for k, v in raw.items()}
        n_ids = data.get("n_ids")
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad scenario file {path}: {exc}") from exc
    return BeepScenario(nodes, edges, wake, horizon, code_file, messages, None if n_ids is None else int(n_ids))
