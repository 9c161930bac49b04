"""Non-adaptive contention resolution on a multiple-access channel.

Station ``v`` owns column ``v`` of a code matrix, repeated ``R`` times. It
wakes at global round ``delta(v)`` and transmits at ``delta(v) + r`` exactly
when bit ``r`` of that vector is 1; nothing is sent once the vector ends. A
round with exactly one transmitter is a success for that station.
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple

from ursc.codeword import BitVector, concat, interval_weight
from ursc.codes.matrix import CodeMatrix
from ursc.codes.oracle import BudgetExceeded
from ursc.codes.params import NoSupportedK, elongation_bounds, max_supported_k


class DegenerateCode(ValueError):
    pass


@dataclass(frozen=True)
class CRInstance:
    n: int
    stations: tuple[int, ...]
    delta: dict[int, int]
    s: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "stations", tuple(sorted(set(self.stations))))
        if not self.stations:
            raise ValueError("an instance needs at least one station")
        if any(not 1 <= v <= self.n for v in self.stations):
            raise ValueError(f"station ids must lie in [1, {self.n}]")
        if self.s < 1:
            raise ValueError("s must be at least 1")
        missing = set(self.stations) - self.delta.keys()
        if missing:
            raise ValueError(f"no activation round for {sorted(missing)}")
        if any(self.delta[v] < 0 for v in self.stations):
            raise ValueError("activation rounds must be nonnegative")

    @property
    def k(self) -> int:
        return len(self.stations)


@dataclass(frozen=True)
class TransmissionVector:
    station: int
    bits: BitVector
    repetitions: int


class RoundOutcome(NamedTuple):
    round: int
    outcome: str  # "silence", "success" or "collision"
    stations: tuple[int, ...]

    def line(self) -> str:
        return f"{self.round},{self.outcome},{';'.join(map(str, self.stations))}"


RoundLog = list[RoundOutcome]


@dataclass
class LatencyReport:
    successes: dict[int, list[int]]
    latency: dict[int, int | None]


def weight_floor(m: CodeMatrix) -> int:
    """Smallest lower-segment weight over all columns at ``k = n``."""
    e = elongation_bounds(m.params, m.n)
    return min(interval_weight(col, e.tau1, e.tau2) for col in m.columns)


def repetition_count(m: CodeMatrix, s: int, alpha: Fraction) -> int:
    alpha = Fraction(alpha)
    if alpha >= 1:
        raise ValueError("the protocol needs alpha < 1: the repetition count divides by 1 - alpha")
    wf = weight_floor(m)
    if wf == 0:
        raise DegenerateCode("some column has no ones in its lower segment")
    return math.ceil(Fraction(s) / ((1 - alpha) * wf))


def transmission_vector(
    m: CodeMatrix, v: int, s: int, alpha: Fraction, repetitions: int | None = None
) -> TransmissionVector:
    """Column ``v`` repeated ``ceil(s / ((1 - alpha) * weight_floor))`` times,
    or ``repetitions`` times when given."""
    if not 1 <= v <= m.n:
        raise ValueError(f"station {v} outside [1, {m.n}]")
    r = repetition_count(m, s, alpha) if repetitions is None else repetitions
    if r < 1:
        raise ValueError("repetitions must be at least 1")
    return TransmissionVector(v, concat([m.columns[v - 1]] * r), r)


def simulate_channel(
    inst: CRInstance, vectors: dict[int, TransmissionVector], horizon: int
) -> RoundLog:
    missing = set(inst.stations) - vectors.keys()
    if missing:
        raise ValueError(f"no transmission vector for {sorted(missing)}")
    log: RoundLog = []
    for g in range(horizon):
        active = []
        for v in inst.stations:
            r = g - inst.delta[v]
            vec = vectors[v].bits
            if 0 <= r < vec.length and vec.value >> r & 1:
                active.append(v)
        if not active:
            log.append(RoundOutcome(g, "silence", ()))
        elif len(active) == 1:
            log.append(RoundOutcome(g, "success", tuple(active)))
        else:
            log.append(RoundOutcome(g, "collision", tuple(active)))
    return log


def latency_report(log: RoundLog, inst: CRInstance) -> LatencyReport:
    succ: dict[int, list[int]] = {v: [] for v in inst.stations}
    for rec in log:
        if rec.outcome == "success":
            (v,) = rec.stations
            succ[v].append(rec.round - inst.delta[v])
    lat = {v: (lst[inst.s - 1] if len(lst) >= inst.s else None) for v, lst in succ.items()}
    return LatencyReport(succ, lat)


def latency_bound(m: CodeMatrix, k: int, repetitions: int) -> int:
    """Largest local round by which every station must be done.

    Within the contender range the code guarantees, the last copy only needs
    its prefix up to ``tau2(n, k)``; otherwise the whole vector is allowed.
    """
    try:
        supported = max_supported_k(m.params, m.t)
    except NoSupportedK:
        supported = 1
    if 2 <= k <= min(supported, m.n):
        return (repetitions - 1) * m.t + elongation_bounds(m.params, k).tau2
    return repetitions * m.t - 1


def default_horizon(m: CodeMatrix, inst: CRInstance, repetitions: int) -> int:
    return max(inst.delta[v] for v in inst.stations) + latency_bound(m, inst.k, repetitions) + 1


@dataclass(frozen=True)
class CRCounterexample:
    stations: tuple[int, ...]
    delta: dict[int, int]
    station: int
    successes: tuple[int, ...]
    bound: int


def _sweep_subset(args) -> CRCounterexample | None:
    m, stations, s, offset_bound, reps = args
    vectors = {v: transmission_vector(m, v, s, Fraction(0), reps) for v in stations}
    bound = latency_bound(m, len(stations), reps)
    for offs in itertools.product(range(offset_bound), repeat=len(stations)):
        inst = CRInstance(m.n, stations, dict(zip(stations, offs)), s)
        log = simulate_channel(inst, vectors, max(offs) + bound + 1)
        rep = latency_report(log, inst)
        for v in stations:
            if rep.latency[v] is None:
                return CRCounterexample(stations, inst.delta, v, tuple(rep.successes[v]), bound)
    return None


def exhaustive_cr_check(
    m: CodeMatrix,
    alpha: Fraction,
    k_max: int,
    s: int,
    offset_bound: int,
    *,
    repetitions: int | None = None,
    budget: int | None = None,
    workers: int = 1,
) -> CRCounterexample | None:
    """Every station set of size ``<= k_max`` with every activation vector in
    ``[0, offset_bound)^|T|``; ``None`` when all reach ``s`` successes in time.

    The first counterexample in ``(|T|, T, delta)`` order is returned.
    """
    if not 1 <= k_max <= m.n:
        raise ValueError(f"k_max must lie in [1, {m.n}]")
    if offset_bound < 1:
        raise ValueError("offset_bound must be positive")
    reps = repetition_count(m, s, alpha) if repetitions is None else repetitions
    total = sum(math.comb(m.n, k) * offset_bound**k for k in range(1, k_max + 1))
    if budget is not None and total > budget:
        raise BudgetExceeded(f"{total} instances exceed the budget of {budget}")
    jobs = [
        (m, T, s, offset_bound, reps)
        for k in range(1, k_max + 1)
        for T in itertools.combinations(range(1, m.n + 1), k)
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_subset, jobs))
    else:
        results = map(_sweep_subset, jobs)
    for res in results:
        if res is not None:
            return res
    return None


@dataclass
class CRScenario:
    instance: CRInstance
    horizon: int | None
    code_file: str
    alpha: Fraction | None
    repetitions: int | None


def load_instance(path: str | Path, n: int | None = None) -> CRScenario:
    """Read ``{stations, delta, s, horizon, code_file}`` JSON.

    ``alpha`` (a ``p/q`` string) and ``repetitions`` are optional extras;
    ``code_file`` is resolved relative to the JSON file.
    """
    from ursc.codes.params import parse_rational

    path = Path(path)
    data = json.loads(path.read_text())
    try:
        stations = [int(v) for v in data["stations"]]
        delta = {int(k): int(v) for k, v in data["delta"].items()}
        code_file = str((path.parent / data["code_file"]).resolve())
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad instance file {path}: {exc}") from exc
    alpha = data.get("alpha")
    inst = CRInstance(n if n is not None else max(stations), tuple(stations), delta, int(data.get("s", 1)))
    horizon = data.get("horizon")
    reps = data.get("repetitions")
    return CRScenario(
        inst,
        None if horizon is None else int(horizon),
        code_file,
        None if alpha is None else parse_rational(str(alpha)),
        None if reps is None else int(reps),
    )
