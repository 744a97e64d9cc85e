"""Exit criteria for the build, one test per criterion.

Each test logs a PASS/FAIL line that pytest repeats in its terminal summary.
Run alone with ``pytest tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
"""

import contextlib
import io
import json
import math
import subprocess
import sys
import time

import jsonschema
import numpy as np
import pytest

from spinstat import cli
from spinstat import exchange_ops as ex
from spinstat.cgc_engine import (
    TABLE_SCHEMA,
    build_table,
    check_coefficient_symmetry,
    check_oracle_equivalence,
    check_orthogonality,
    check_ratio_reciprocity,
)
from spinstat.exact_number import HalfInt, parse
from spinstat.rotations import (
    d_matrix,
    d_matrix_pi,
    exchange_by_rotation_opposite_spin,
    exchange_by_rotation_same_spin,
    singlet_rotation_invariance,
)
from spinstat.spin_space import STATE_SCHEMA, SplitMix64, derive_seed, random_state

pytestmark = pytest.mark.acceptance
SEED = 42

# (j, m, m1, m2) -> value, as displayed for s=1
GOLDEN_S1 = {
    (2, 2, 1, 1): "1",
    (2, 1, 1, 0): "sqrt(1/2)",
    (2, 1, 0, 1): "sqrt(1/2)",
    (2, 0, -1, 1): "sqrt(1/6)",
    (2, 0, 1, -1): "sqrt(1/6)",
    (2, 0, 0, 0): "sqrt(2/3)",
    (0, 0, -1, 1): "sqrt(1/3)",
    (0, 0, 1, -1): "sqrt(1/3)",
    (0, 0, 0, 0): "-sqrt(1/3)",
    (1, 1, 1, 0): "sqrt(1/2)",
    (1, 1, 0, 1): "-sqrt(1/2)",
    (1, 0, 1, -1): "sqrt(1/2)",
    (1, 0, -1, 1): "-sqrt(1/2)",
}


def run_cli(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        try:
            code = cli.main(list(argv))
        except SystemExit as exc:
            code = exc.code
    return code, buf.getvalue()


def test_criterion_1_golden_table(record):
    build_table.cache_clear()
    t0 = time.perf_counter()
    code, out = run_cli("table", "--two-s", "2")
    elapsed = time.perf_counter() - t0
    printed = {}
    for line in out.splitlines():
        if line.startswith("j="):
            left, value = line.split(" : ")
            labels = left.replace("|", "").split()
            printed[tuple(int(x.split("=")[1]) for x in labels)] = parse(value)
    hits = sum(printed.get(k) == parse(v) for k, v in GOLDEN_S1.items())
    ok = code == 0 and hits == 13 and elapsed < 1.0
    record(1, "golden s=1 table", ok, f"{hits}/13 exact, {elapsed:.3f} s < 1 s")
    assert ok


def test_criterion_2_identity_suite(record):
    build_table.cache_clear()
    t0 = time.perf_counter()
    cases = failures = 0
    for two_s in range(41):
        table = build_table(two_s)
        verdicts = [check_ratio_reciprocity(two_s, j) for j in range(two_s + 1)]
        verdicts += [check_coefficient_symmetry(table), check_orthogonality(table)]
        cases += sum(v.cases for v in verdicts)
        failures += sum(len(v.failures) for v in verdicts)
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 60
    record(2, "(e4), (e5), (e6) and orthogonality, two_s <= 40", ok, f"{cases} cases, {failures} failures, {elapsed:.1f} s < 60 s")
    assert ok


def test_criterion_3_oracle(record):
    t0 = time.perf_counter()
    cases = failures = 0
    for two_s in range(13):
        v = check_oracle_equivalence(build_table(two_s))
        cases += v.cases
        failures += len(v.failures)
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 30
    record(3, "recurrence table equals closed-form oracle, two_s <= 12", ok, f"{cases} entries, {failures} mismatches, {elapsed:.1f} s < 30 s")
    assert ok


def test_criterion_4_spin_statistics(record):
    t0 = time.perf_counter()
    signs = {}
    for two_s in range(11):
        report = ex.verify_spin_statistics(two_s, trials=100, seed=SEED)
        signs[two_s] = report.sign_observed
    elapsed = time.perf_counter() - t0
    wrong = [t for t, s in signs.items() if s != (-1 if t % 2 else 1)]
    ok = not wrong and elapsed < 30
    shown = " ".join(f"{HalfInt(t)}:{s:+d}" if isinstance(s, int) else f"{HalfInt(t)}:{s}" for t, s in signs.items())
    record(4, "exchange sign (-1)^{2s}, 100 states per two_s <= 10", ok, f"s:sign {shown}; {elapsed:.1f} s < 30 s")
    assert ok


def test_criterion_5_involutions(record):
    failures = checked = 0
    for two_s in range(11):
        table = build_table(two_s)
        for t in range(100):
            psi = random_state(two_s, derive_seed(SEED, t))
            p = ex.parity(psi, table)
            e = ex.exchange(psi, table)
            results = (ex.parity(p, table) == psi, ex.spin_swap(ex.spin_swap(psi)) == psi, ex.exchange(e, table) == psi)
            checked += 3
            failures += results.count(False)
    ok = failures == 0
    record(5, "P^2 = E_s^2 = E^2 = 1, 100 states per two_s <= 10", ok, f"{checked} checks, {failures} failures")
    assert ok


def test_criterion_6_rotation_signs(record):
    failures = checked = 0
    for two_s in range(41):
        sign = -1 if two_s % 2 else 1
        d = d_matrix_pi(two_s)
        for two_m in range(two_s, -two_s - 1, -2):
            m = HalfInt(two_m)
            checked += 3
            failures += exchange_by_rotation_same_spin(two_s, m) != sign
            failures += exchange_by_rotation_opposite_spin(two_s, m) != sign
            failures += d.element(-m, m) != (-1 if ((two_s - two_m) // 2) % 2 else 1)
        checked += 1
        failures += not np.array_equal(d.entries @ d.entries, sign * np.eye(two_s + 1, dtype=np.int64))
    ok = failures == 0
    record(6, "rotation exchange signs, d_(-m,m)(pi) and d(pi)^2, two_s <= 40", ok, f"{checked} exact checks, {failures} failures")
    assert ok


def test_criterion_7_singlet(record):
    rng = SplitMix64(SEED)
    worst, signs, bad = 0.0, set(), 0
    for two_s in (1, 2, 3, 4):
        for _ in range(100):
            v = singlet_rotation_invariance(two_s, cli.random_rotation(rng))
            worst = max(worst, v.max_deviation)
            bad += not v.invariant
            signs.add((two_s, v.rotation_sign))
    odd_mismatch = all(sign == 1 for t, sign in signs if t % 2)
    ok = bad == 0 and worst < 1e-10 and odd_mismatch
    record(7, "singlet invariant under 100 rotations per two_s in 1..4", ok,
           f"max deviation {worst:.1e} < 1e-10, rotation sign +1 while (-1)^(2s) = -1 for odd two_s")
    assert ok


def test_criterion_8_float_d(record):
    rng = SplitMix64(SEED)
    thetas = [rng.next() / 2**64 * 4 * math.pi - 2 * math.pi for _ in range(100)]
    worst_orth = worst_pi = 0.0
    for two_j in range(21):
        for theta in thetas:
            d = d_matrix(two_j, theta).entries
            worst_orth = max(worst_orth, float(np.max(np.abs(d.T @ d - np.eye(two_j + 1)))))
        worst_pi = max(worst_pi, float(np.max(np.abs(d_matrix(two_j, math.pi).entries - d_matrix_pi(two_j).entries))))
    ok = worst_orth < 1e-12 and worst_pi < 1e-12
    record(8, "floating d-matrix orthogonality and pi path, two_j <= 20", ok,
           f"max |d^T d - I| {worst_orth:.1e}, max |d(pi) - exact| {worst_pi:.1e}, tolerance 1e-12")
    assert ok


def _subprocess(*argv, stdin=None):
    return subprocess.run([sys.executable, "-m", "spinstat", *argv], input=stdin, capture_output=True, text=True)


def test_criterion_9_cli_contract(record, monkeypatch):
    problems = []
    commands = [
        ["table", "--two-s", "3", "--format", "json"],
        ["verify", "--max-two-s", "4", "--trials", "10", "--seed", "7"],
        ["verify", "--max-two-s", "3", "--trials", "5", "--format", "json"],
        ["demo-rotation", "--two-s", "3", "--case", "singlet", "--seed", "11"],
        ["demo-rotation", "--two-s", "5", "--two-m", "-3", "--case", "opposite"],
    ]
    for argv in commands:
        a, b = _subprocess(*argv), _subprocess(*argv)
        if a.returncode != 0 or a.stdout != b.stdout:
            problems.append(f"not deterministic or failing: {argv}")

    psi = json.dumps(random_state(2, 5).to_json())
    a, b = _subprocess("exchange", stdin=psi), _subprocess("exchange", stdin=psi)
    if a.returncode != 0 or a.stdout != b.stdout:
        problems.append("exchange command not deterministic")
    else:
        jsonschema.validate(json.loads(a.stdout), STATE_SCHEMA)
    jsonschema.validate(json.loads(run_cli("table", "--two-s", "2", "--format", "json")[1]), TABLE_SCHEMA)

    for argv in (["table"], ["verify", "--suite", "bogus"], ["demo-rotation", "--two-s", "1", "--case", "same"]):
        if run_cli(*argv)[0] != 2:
            problems.append(f"expected exit 2: {argv}")
    if _subprocess("exchange", stdin="{").returncode != 2:
        problems.append("malformed JSON should exit 2")

    monkeypatch.setattr(ex, "exchange", ex.swapped_parity)
    if run_cli("verify", "--max-two-s", "1", "--suite", "exchange", "--trials", "2")[0] != 1:
        problems.append("a broken exchange should exit 1")

    ok = not problems
    record(9, "CLI determinism, exit codes 0/1/2, JSON schemas", ok, "; ".join(problems) or "byte-identical reruns, codes 0/1/2 observed, schemas valid")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
