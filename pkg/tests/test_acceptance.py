"""Acceptance criteria, one test each.

Every test records a ``criterion N: PASS|FAIL ...`` line; the lines are
printed together at the end of the pytest run.
"""

import hashlib
import itertools
import json
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, FIXTURES
from naive import naive_cell_verdicts
from ursc.beeping.blockid import block_id, block_length, decode_block_id
from ursc.beeping.sweep import exhaustive_sweep
from ursc.cli import main
from ursc.codes.cbp import cell_verdicts, check_cbp
from ursc.codes.construct import IterationsExhausted, construct_ursc
from ursc.codes.matrix import CodeMatrix, read_code, rng_for, sample_columns, write_code
from ursc.codes.oracle import verify_ursc_bruteforce
from ursc.codes.params import ConstructionParams, ElongationPair, elongation_bounds
from ursc.codes.stats import empirical_segment_stats, lower_weight_interval, upper_weight_interval
from ursc.codeword import BitVector, concat
from ursc.contention import exhaustive_cr_check

# calibration for the n = 8 construction (see README)
CAL_C = Fraction(184)
CAL_SEED = 0
CAL_ITERATIONS = 7
CAL_SHA256 = "1b404447a7924d9d090f1c51275de119c9ff7c03c584fd6a1a4e23e902c0cb05"


def record(n, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
    print(ACCEPTANCE_LINES[-1])
    assert ok, detail


def _random_windows(rng, n, t):
    out = {}
    for k in range(2, n + 1):
        a = rng.randrange(t)
        out[k] = ElongationPair(a, rng.randrange(a, t))
    return out


def _implication_counterexample(m, alpha, windows):
    if not check_cbp(m, alpha, windows, k_values=sorted(windows)).passed:
        return None, False
    wit = verify_ursc_bruteforce(m, 2 * alpha, lambda k: windows[k].tau2, k_max=max(windows))
    return wit, True


def test_1_oracle_equivalence():
    start = time.perf_counter()
    rng = random.Random(20240601)
    matrices = cbp_passes = 0
    bad = []
    for _ in range(1000):
        n, t = rng.randint(2, 5), rng.randint(1, 12)
        density = rng.choice(["01", "001", "0001", "011"])
        m = CodeMatrix.from_strings(["".join(rng.choice(density) for _ in range(t)) for _ in range(n)])
        alpha = Fraction(rng.randint(1, 16), 16)
        windows = _random_windows(rng, n, t)
        wit, passed = _implication_counterexample(m, alpha, windows)
        matrices += 1
        cbp_passes += passed
        if wit is not None:
            bad.append((m, alpha, windows, wit))
    # random matrices this small almost never pass the check, so every pair
    # of sparse two-column codes is swept as well
    for t in range(6, 13):
        cols = [BitVector.from_positions(t, p).to_string() for w in (1, 2, 3)
                for p in itertools.combinations(range(t), w)]
        for a, b in itertools.combinations(cols, 2):
            m = CodeMatrix.from_strings([a, b])
            for alpha in (Fraction(1), Fraction(3, 4), Fraction(1, 2)):
                windows = {2: ElongationPair(0, t - 1)}
                wit, passed = _implication_counterexample(m, alpha, windows)
                matrices += 1
                cbp_passes += passed
                if wit is not None:
                    bad.append((m, alpha, windows, wit))
    # a larger fixture where the implied property is not automatic (2 alpha = 1)
    beep4 = read_code(FIXTURES / "beep4.ursc")
    wit, passed = _implication_counterexample(beep4, Fraction(1, 2), {2: ElongationPair(0, beep4.t - 1)})
    record(
        1,
        not bad and passed and wit is None,
        f"{matrices} matrices, {cbp_passes} pass the check, {len(bad)} counterexamples, "
        f"beep4 at alpha=1/2 {'implies' if passed and wit is None else 'FAILS'} "
        f"({time.perf_counter() - start:.1f}s)",
    )


def test_2_checker_matches_naive():
    start = time.perf_counter()
    rng = random.Random(77)
    mismatches = cells = 0
    for _ in range(100):
        n, t = rng.randint(2, 6), rng.randint(1, 64)
        density = rng.choice(["01", "001", "0111"])
        m = CodeMatrix.from_strings(["".join(rng.choice(density) for _ in range(t)) for _ in range(n)])
        alpha = Fraction(rng.randint(1, 8), 8)
        windows = _random_windows(rng, n, t)
        fast = cell_verdicts(m, alpha, windows)
        w_ref, c_ref = naive_cell_verdicts(m, alpha, windows)
        for wi, k in enumerate(fast.k_values):
            for j in range(n):
                cells += 1
                mismatches += bool(fast.weight[wi, j]) != w_ref[k, j]
                for jp in range(n):
                    for i in range(t):
                        cells += 1
                        mismatches += bool(fast.collision[wi, j, jp, i]) != c_ref[k, j, jp, i]
    record(2, mismatches == 0, f"{cells} cells over 100 matrices, {mismatches} mismatches "
           f"({time.perf_counter() - start:.1f}s)")


def test_3_hand_fixtures(t16_pass, t16_fail):
    tau2 = elongation_bounds(t16_pass.params, 2).tau2
    ok_pass = verify_ursc_bruteforce(t16_pass, Fraction(1), lambda k: tau2, k_max=2) is None
    wit = verify_ursc_bruteforce(t16_fail, Fraction(1), lambda k: tau2, k_max=2)
    ok_fail = wit is not None and wit.designated == 0 and wit.shifts == {1: 0}
    record(3, tau2 == 15 and ok_pass and ok_fail,
           f"{{0,4}}/{{0,8}} passes: {ok_pass}; {{0,4}}/{{0,5}} witness: {wit}")


def test_4_sampling_fidelity():
    start = time.perf_counter()
    p = ConstructionParams(16, "1/1", "1/2", "1/1", seed=0)
    draws, chunk = 10**5, 10**4
    rng = rng_for(p.seed)
    ones = np.zeros(p.t, dtype=np.int64)
    for _ in range(draws // chunk):
        ones += sample_columns(p, rng, chunk).sum(axis=0)
    L = p.block_len
    per_block = ones.reshape(-1, L).sum(axis=1)
    samples = draws * L
    prob = 1 / np.sqrt(np.arange(per_block.size) + 1)
    se = np.sqrt(prob * (1 - prob) / samples)
    z = np.abs(per_block[1:] / samples - prob[1:]) / se[1:]
    block0 = bool(per_block[0] == samples)
    outside = int((z > 3).sum())
    record(4, block0 and outside == 0,
           f"{per_block.size} blocks, block 0 all ones: {block0}, max |z| = {z.max():.2f}, "
           f"{outside} blocks beyond 3 se ({time.perf_counter() - start:.1f}s)")


# observed means at seed 0, frozen as a regression fixture
STATS_FROZEN = (Fraction(123049, 5000), Fraction(2081371, 10000))


def test_5_statistical_bounds():
    p = ConstructionParams(32, "1/1", "1/2", "64/1")
    st = empirical_segment_stats(p, 4, 0, 10**4, seed=0)
    up, lo = upper_weight_interval(p, 4), lower_weight_interval(p, 4)
    in_up = up[0] < st.mean_upper < up[1]
    in_lo = lo[0] < st.mean_lower < lo[1]
    frozen = (st.mean_upper, st.mean_lower) == STATS_FROZEN
    record(5, in_up and in_lo and frozen,
           f"mean_upper {float(st.mean_upper):.3f} in ({up[0]:.3f}, {up[1]:.3f}): {in_up}; "
           f"mean_lower {float(st.mean_lower):.3f} in ({lo[0]:.3f}, {lo[1]:.3f}): {in_lo}")


def test_6_construction_calibration(tmp_path, capsys):
    start = time.perf_counter()
    out = tmp_path / "cal.ursc"
    code = main(["construct", "--n", "8", "--alpha", "1/1", "--eps", "1/2", "--c", f"{CAL_C}/1",
                 "--seed", str(CAL_SEED), "-o", str(out)])
    text = capsys.readouterr().out
    digest = hashlib.sha256(out.read_bytes()).hexdigest() if out.exists() else None
    pinned = code == 0 and f"iterations: {CAL_ITERATIONS}" in text and digest == CAL_SHA256
    successes = 0
    for s in range(10):
        try:
            construct_ursc(ConstructionParams(8, "1/1", "1/2", CAL_C, seed=1000 * s), 20)
            successes += 1
        except IterationsExhausted:
            pass
    record(6, pinned and successes >= 9,
           f"c={CAL_C}: pinned seed {CAL_SEED} reproduced: {pinned}; {successes}/10 seeds succeed "
           f"within 20 iterations ({time.perf_counter() - start:.1f}s)")


@pytest.mark.slow
def test_7_beeping_safety_inclusion(beep4):
    start = time.perf_counter()
    rep = exhaustive_sweep(beep4, beep4.n, max_nodes=4)
    elapsed = time.perf_counter() - start
    ok = rep.passed and rep.inclusion_graphs == rep.graphs and elapsed < 15 * 60
    record(7, ok, f"{rep.graphs} graphs, period {rep.period}, {len(rep.safety)} safety and "
           f"{len(rep.inclusion)} inclusion failures, Inclusion checked on {rep.inclusion_graphs} "
           f"({elapsed:.0f}s)")


def test_8_contention_exhaustive(t16_pass):
    start = time.perf_counter()
    cex = exhaustive_cr_check(t16_pass, Fraction(1), 2, 1, 16, repetitions=1)
    record(8, cex is None, f"all |T| <= 2, offsets [0,16)^2: counterexample {cex} "
           f"({time.perf_counter() - start:.1f}s)")


def test_9_block_ids():
    start = time.perf_counter()
    worst = None
    for n in range(2, 257):
        vals = [block_id(v, n).value for v in range(1, n + 1)]
        d = min((a ^ b).bit_count() for a, b in itertools.combinations(vals, 2))
        worst = d if worst is None else min(worst, d)
    misdecodes = 0
    for n in range(2, 65):
        lb = block_length(n)
        zero = BitVector.zeros(lb)
        for u in range(1, n + 1):
            s = list(concat([zero, block_id(u, n), zero]))
            for off in range(len(s) - lb + 1):
                got = decode_block_id(BitVector.from_bits(s[off : off + lb]), n)
                misdecodes += got != (u if off == lb else None)
    record(9, worst >= 2 and misdecodes == 0,
           f"min pairwise distance {worst} (n <= 256), {misdecodes} misaligned decodes (n <= 64) "
           f"({time.perf_counter() - start:.1f}s)")


def _corpus(tmp):
    for f in FIXTURES.glob("*.ursc"):
        (tmp / f.name).write_bytes(f.read_bytes())
    write_code(CodeMatrix.from_strings(["0" * 16] * 2, c="6"), tmp / "zero.ursc")
    (tmp / "learn.json").write_text(json.dumps({
        "nodes": [1, 2, 3, 4], "edges": [[1, 2], [1, 3], [1, 4]],
        "wake": {"1": 0, "2": 100, "3": 7, "4": 333}, "horizon": 3000, "code_file": "beep4.ursc"}))
    (tmp / "bcast.json").write_text(json.dumps({
        "nodes": [1, 2], "edges": [[1, 2]], "wake": {"1": 0, "2": 700}, "horizon": 12000,
        "code_file": "bcast8.ursc", "messages": {"1": "bits:101", "2": "bits:010"}}))
    (tmp / "cr.json").write_text(json.dumps({
        "stations": [1, 2], "delta": {"1": 3, "2": 0}, "s": 1, "code_file": "t16_pass.ursc",
        "repetitions": 2}))
    return [
        ["construct", "--n", "2", "--c", "16/1", "--seed", "2", "-o", "{out}"],
        ["construct", "--n", "3", "--c", "64/1", "--seed", "0", "-o", "{out}"],
        ["check", "t16_pass.ursc"],
        ["check", "t16_fail.ursc", "--alpha", "1/2", "-o", "{out}"],
        ["check", "beep4.ursc", "--alpha", "1/1", "-o", "{out}"],
        ["check", "bcast8.ursc", "-o", "{out}"],
        ["check", "zero.ursc", "-o", "{out}"],
        ["verify-oracle", "t16_pass.ursc"],
        ["verify-oracle", "t16_fail.ursc"],
        ["verify-oracle", "beep4.ursc", "--tau", "full", "--k-max", "3"],
        ["verify-classic", "bcast8.ursc", "--k", "3"],
        ["sim-beep", "learn.json"],
        ["sim-beep", "bcast.json", "-o", "{out}"],
        ["sim-cr", "cr.json"],
        ["stats", "--n", "8", "--c", "16", "--k", "3", "--trials", "2000", "--shift", "5"],
    ]


def test_10_parallelism_is_invisible(tmp_path, capsys, monkeypatch):
    start = time.perf_counter()
    monkeypatch.chdir(tmp_path)
    differing = []
    commands = _corpus(tmp_path)
    for idx, argv in enumerate(commands):
        results = []
        for workers in ("1", "8"):
            out = tmp_path / f"out{idx}_{workers}"
            args = [a.replace("{out}", str(out)) for a in argv] + ["--parallelism", workers]
            code = main(args)
            stdout = capsys.readouterr().out.replace(str(out), "{out}")
            results.append((code, stdout, out.read_bytes() if out.exists() else None))
        if results[0] != results[1]:
            differing.append(" ".join(argv))
    record(10, not differing, f"{len(commands)} commands, differing at --parallelism 8: "
           f"{differing or 'none'} ({time.perf_counter() - start:.1f}s)")
