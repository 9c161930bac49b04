"""Command-line front end.

Exit codes: 0 success, 1 property violation, 2 input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from ursc.codes.cbp import check_cbp
from ursc.codes.construct import IterationsExhausted, construct_ursc, construct_ursc_with_length
from ursc.codes.matrix import FormatError, read_code, write_code
from ursc.codes.oracle import BudgetExceeded, verify_classic, verify_ursc_bruteforce
from ursc.codes.params import ConstructionParams, elongation_bounds, format_rational, parse_rational
from ursc.codes.stats import empirical_segment_stats, lower_weight_interval, upper_weight_interval

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_BUDGET = 10**7


class InputError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational p/q: {text!r}") from exc


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _default_seed() -> int:
    raw = os.environ.get("URSC_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"URSC_SEED must be an integer, got {raw!r}")


def _load_code(path: str):
    try:
        return read_code(path)
    except (OSError, FormatError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read code file {path}: {exc}") from exc


def _emit(lines: list[str], out: str | None) -> None:
    text = "".join(line + "\n" for line in lines)
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_construct(a: argparse.Namespace) -> int:
    seed = _default_seed() if a.seed is None else a.seed
    params = ConstructionParams(a.n, a.alpha, a.eps, a.c, seed=seed)
    try:
        if a.length is None:
            res = construct_ursc(params, a.max_iters, a.parallelism)
        else:
            res = construct_ursc_with_length(params, a.length, a.max_iters, a.parallelism)
    except IterationsExhausted as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        print(f"n: {params.n} t: {params.t}", file=sys.stderr)
        return EXIT_VIOLATION
    m = res.matrix
    write_code(m, a.output)
    print(f"iterations: {res.iterations}")
    print(f"seed: {m.params.seed}")
    print(f"n: {m.n} t: {m.t}")
    print("k tau1 tau2")
    for k in range(2, res.k_max + 1):
        e = elongation_bounds(m.params, k)
        print(f"{k} {e.tau1} {e.tau2}")
    print(f"wrote {a.output}")
    return EXIT_OK


def _k_values(m, k_max: int | None) -> range:
    top = m.n if k_max is None else k_max
    if not 2 <= top <= m.n:
        raise InputError(f"--k-max must lie in [2, {m.n}]")
    return range(2, top + 1)


def cmd_check(a: argparse.Namespace) -> int:
    m = _load_code(a.code)
    alpha = m.params.alpha if a.alpha is None else a.alpha
    rep = check_cbp(m, alpha, k_values=_k_values(m, a.k_max), fail_fast=a.fail_fast, workers=a.parallelism)
    lines = [f"{v.k},{v.j},{v.j_prime},{v.i},{v.which.value}" for v in rep.violations]
    if a.output is not None:
        _emit(lines, a.output)
    else:
        _emit(lines[: a.show], None)
        if len(lines) > a.show:
            print(f"... {len(lines) - a.show} more")
    print(rep.summary())
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def _tau_fn(m, mode: str) -> Callable[[int], int]:
    if mode == "full":
        return lambda k: m.t - 1
    return lambda k: elongation_bounds(m.params, k).tau2


def cmd_verify_oracle(a: argparse.Namespace) -> int:
    m = _load_code(a.code)
    alpha = m.params.alpha if a.alpha is None else a.alpha
    top = _k_values(m, a.k_max)[-1]
    wit = verify_ursc_bruteforce(m, alpha, _tau_fn(m, a.tau), k_max=top, budget=a.budget)
    if wit is None:
        print(f"URSC holds for 2 <= k <= {top} at alpha={format_rational(Fraction(alpha))}")
        return EXIT_OK
    shifts = " ".join(f"c{j}:{i}" for j, i in sorted(wit.shifts.items()))
    print(
        f"witness: k={wit.k} T={','.join(f'c{j}' for j in wit.T)} designated=c{wit.designated} "
        f"shifts={shifts} covered={wit.lhs} threshold={format_rational(wit.rhs_threshold)}"
    )
    return EXIT_VIOLATION


def cmd_verify_classic(a: argparse.Namespace) -> int:
    m = _load_code(a.code)
    if not 2 <= a.k <= m.n:
        raise InputError(f"--k must lie in [2, {m.n}]")
    wit = verify_classic(m, a.k, budget=a.budget)
    if wit is None:
        print(f"superimposed for k={a.k}")
        return EXIT_OK
    print(f"witness: T={','.join(f'c{j}' for j in wit.T)} designated=c{wit.designated}")
    return EXIT_VIOLATION


def cmd_sim_beep(a: argparse.Namespace) -> int:
    from ursc.beeping.broadcast import simulate_local_broadcast
    from ursc.beeping.network import (
        CodeTooShort,
        SafetyViolation,
        discovery_rounds,
        learning_events,
        simulate_neighborhood_learning,
    )
    from ursc.beeping.scenario import load_scenario

    try:
        sc = load_scenario(a.scenario)
    except OSError as exc:
        raise InputError(str(exc)) from exc
    m = _load_code(sc.code_file)
    try:
        if sc.messages is None:
            n_ids = m.n if sc.n_ids is None else sc.n_ids
            g = sc.graph(n_ids)
            sched = sc.schedule()
            found = simulate_neighborhood_learning(g, sched, m, sc.horizon)
            lines = [e.line() for e in learning_events(sched, found)]
            disc = discovery_rounds(g, sched, found)
            summary = {
                "learned": {str(v): sorted(u for _, u in found[v]) for v in sorted(found)},
                "discovery": {f"{v}-{u}": r for (v, u), r in disc.items()},
                "complete": all(r is not None for r in disc.values()),
            }
        else:
            n_ids = max(sc.nodes) if sc.n_ids is None else sc.n_ids
            g = sc.graph(n_ids)
            out = simulate_local_broadcast(g, sc.schedule(), m, sc.messages, sc.horizon)
            lines = [e.line() for e in out.events]
            summary = {
                "messages": {str(v): {str(u): s for u, s in d.items()} for v, d in out.messages.items()},
                "incomplete": {str(v): sorted(s) for v, s in out.incomplete.items() if s},
                "complete": not any(out.incomplete.values()),
            }
    except CodeTooShort as exc:
        raise InputError(f"code too short: {exc}") from exc
    except SafetyViolation as exc:
        print(f"safety violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(lines, a.output)
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def cmd_sim_cr(a: argparse.Namespace) -> int:
    from ursc.contention import (
        CRInstance,
        DegenerateCode,
        default_horizon,
        latency_report,
        load_instance,
        repetition_count,
        simulate_channel,
        transmission_vector,
    )

    try:
        sc = load_instance(a.instance)
    except OSError as exc:
        raise InputError(str(exc)) from exc
    m = _load_code(sc.code_file)
    try:
        inst = CRInstance(m.n, sc.instance.stations, sc.instance.delta, sc.instance.s)
        alpha = m.params.alpha if sc.alpha is None else sc.alpha
        reps = sc.repetitions if sc.repetitions is not None else repetition_count(m, inst.s, alpha)
        vectors = {v: transmission_vector(m, v, inst.s, alpha, reps) for v in inst.stations}
    except (ValueError, DegenerateCode) as exc:
        raise InputError(str(exc)) from exc
    horizon = sc.horizon if sc.horizon is not None else default_horizon(m, inst, reps)
    log = simulate_channel(inst, vectors, horizon)
    rep = latency_report(log, inst)
    _emit([r.line() for r in log], a.output)
    print(f"repetitions: {reps} horizon: {horizon}")
    print("station successes latency")
    for v in inst.stations:
        lat = rep.latency[v]
        print(f"{v} {len(rep.successes[v])} {'none' if lat is None else lat}")
    return EXIT_OK


def cmd_stats(a: argparse.Namespace) -> int:
    seed = _default_seed() if a.seed is None else a.seed
    params = ConstructionParams(a.n, a.alpha, a.eps, a.c, seed=seed)
    if not 2 <= a.k <= a.n:
        raise InputError(f"--k must lie in [2, {a.n}]")
    st = empirical_segment_stats(params, a.k, a.shift, a.trials, seed=seed)
    e = elongation_bounds(params, a.k)
    up = upper_weight_interval(params, a.k)
    lo = lower_weight_interval(params, a.k)
    in_up = up[0] < st.mean_upper < up[1]
    in_lo = lo[0] < st.mean_lower < lo[1]
    print(f"n={a.n} k={a.k} t={params.t} tau1={e.tau1} tau2={e.tau2} trials={a.trials} seed={seed}")
    print(f"mean_upper {format_rational(st.mean_upper)} = {float(st.mean_upper):.6f} "
          f"bounds ({up[0]:.6f}, {up[1]:.6f}) {'in' if in_up else 'out'}")
    print(f"mean_lower {format_rational(st.mean_lower)} = {float(st.mean_lower):.6f} "
          f"bounds ({lo[0]:.6f}, {lo[1]:.6f}) {'in' if in_lo else 'out'}")
    print(f"mean_collision {format_rational(st.mean_collision)} = {float(st.mean_collision):.6f}")
    return EXIT_OK if in_up and in_lo else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--parallelism", type=_positive, default=1, help="worker processes")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="ursc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def params_args(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--alpha", type=_rational, default=Fraction(1))
        sp.add_argument("--eps", type=_rational, default=Fraction(1, 2))
        sp.add_argument("--c", type=_rational, required=True)
        sp.add_argument("--seed", type=int, default=None, help="default: $URSC_SEED or 0")

    sp = sub.add_parser("construct", parents=[common], help="sample and check until a code passes")
    params_args(sp)
    sp.add_argument("--max-iters", type=int, default=20)
    sp.add_argument("--length", type=_positive, default=None, help="fixed code length")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("check", parents=[common], help="Collision Bound Property check")
    sp.add_argument("code")
    sp.add_argument("--alpha", type=_rational, default=None)
    sp.add_argument("--k-max", type=int, default=None)
    sp.add_argument("--fail-fast", action="store_true")
    sp.add_argument("--show", type=int, default=20, help="violations printed without -o")
    sp.add_argument("-o", "--output", default=None, help="write every violation here")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("verify-oracle", parents=[common], help="exhaustive URSC definition check")
    sp.add_argument("code")
    sp.add_argument("--alpha", type=_rational, default=None)
    sp.add_argument("--k-max", type=int, default=None)
    sp.add_argument("--tau", choices=["formula", "full"], default="formula")
    sp.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    sp.set_defaults(func=cmd_verify_oracle)

    sp = sub.add_parser("verify-classic", parents=[common], help="aligned superimposed-code check")
    sp.add_argument("code")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    sp.set_defaults(func=cmd_verify_classic)

    sp = sub.add_parser("sim-beep", parents=[common], help="beeping-network simulation")
    sp.add_argument("scenario")
    sp.add_argument("-o", "--output", default=None, help="event log (default stdout)")
    sp.set_defaults(func=cmd_sim_beep)

    sp = sub.add_parser("sim-cr", parents=[common], help="contention-resolution simulation")
    sp.add_argument("instance")
    sp.add_argument("-o", "--output", default=None, help="round log (default stdout)")
    sp.set_defaults(func=cmd_sim_cr)

    sp = sub.add_parser("stats", parents=[common], help="Monte-Carlo segment statistics")
    params_args(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--shift", type=int, default=0)
    sp.add_argument("--trials", type=int, required=True)
    sp.set_defaults(func=cmd_stats)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    if getattr(a, "max_iters", 1) < 1:
        parser.error("--max-iters must be at least 1")
    if getattr(a, "trials", 1) < 1:
        parser.error("--trials must be at least 1")
    logging.basicConfig(level=logging.DEBUG if a.verbose else logging.WARNING)
    try:
        return a.func(a)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
