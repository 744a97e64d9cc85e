"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a verification failure,
2 on a usage error.  Output is deterministic for fixed flags and seed;
timings go to the output only when ``--timings`` is given.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field

from . import cgc_engine as cg
from . import exchange_ops as ex
from . import rotations as rot
from .exact_number import HalfInt, ParseError, format_value
from .spin_space import IndexOutOfRange, SplitMix64, TwoParticleState, derive_seed, random_state, valid_projection

DEFAULT_SEED = 42


@dataclass
class SuiteResult:
    suite: str
    cases: int = 0
    failures: int = 0
    duration_ms: float = 0.0
    details: list[str] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def add(self, verdict: cg.Verdict) -> None:
        self.cases += verdict.cases
        self.failures += len(verdict.failures)
        self.details.extend(verdict.failures)

    def check(self, ok: bool, detail: str) -> None:
        self.cases += 1
        if not ok:
            self.failures += 1
            self.details.append(detail)

    def to_json(self, timings: bool = False) -> dict:
        out = {"suite": self.suite, "cases": self.cases, "failures": self.failures, "details": self.details}
        if timings:
            out["duration_ms"] = round(self.duration_ms, 3)
        return out


def _s_label(two_s: int) -> str:
    return f"s={HalfInt(two_s)}"


# ---------------------------------------------------------------------------
# suites

def suite_cgc(max_two_s: int, oracle_max_two_s: int) -> SuiteResult:
    res = SuiteResult("cgc")
    for two_s in range(max_two_s + 1):
        table = cg.build_table(two_s)
        before = res.failures
        for j in range(two_s + 1):
            res.add(cg.check_ratio_reciprocity(two_s, j))
            res.add(cg.check_product_formula(two_s, j))
        res.add(cg.check_coefficient_symmetry(table))
        res.add(cg.check_orthogonality(table))
        res.add(cg.check_ladder_consistency(table))
        checks = "reciprocity, mirror/swap symmetry, orthogonality, ladder, product formula"
        if two_s <= oracle_max_two_s:
            res.add(cg.check_oracle_equivalence(table))
            checks += ", oracle-equivalence"
        status = "ok" if res.failures == before else "FAIL"
        res.lines.append(f"cgc {_s_label(two_s)} (two_s={two_s}): {checks}: {status}")
    return res


def suite_exchange(max_two_s: int, trials: int, seed: int) -> SuiteResult:
    res = SuiteResult("exchange")
    for two_s in range(max_two_s + 1):
        table = cg.build_table(two_s)
        report = ex.verify_spin_statistics(two_s, trials, seed, table)
        expected = ex.statistics_sign(two_s)
        res.check(report.passed, f"{_s_label(two_s)}: exchange sign {report.sign_observed}, expected {expected}")
        involutions_ok = True
        for t in range(trials):
            psi = random_state(two_s, derive_seed(seed, t))
            for name, op in (
                ("P", lambda x: ex.parity(x, table)),
                ("E_s", ex.spin_swap),
                ("E", lambda x: ex.exchange(x, table)),
            ):
                ok = op(op(psi)) == psi
                involutions_ok &= ok
                res.check(ok, f"{_s_label(two_s)} trial {t}: {name}^2 != identity")
        sign = report.sign_observed if isinstance(report.sign_observed, str) else f"{report.sign_observed:+d}"
        res.lines.append(
            f"exchange {_s_label(two_s)} (two_s={two_s}): sign {sign}, expected (-1)^{{2s}} = {expected:+d}, "
            f"{report.states_tested} states, involutions {'ok' if involutions_ok else 'FAIL'}: "
            f"{'ok' if report.passed and involutions_ok else 'FAIL'}"
        )
    return res


def random_rotation(rng: SplitMix64) -> rot.EulerRotation:
    a, b, g = (rng.next() / 2**64 * 2 * math.pi for _ in range(3))
    return rot.EulerRotation(a, b, g)


def suite_rotation(max_two_s: int, trials: int, seed: int) -> SuiteResult:
    import numpy as np

    res = SuiteResult("rotation")
    rng = SplitMix64(seed)
    for two_s in range(max_two_s + 1):
        before = res.failures
        sign = ex.statistics_sign(two_s)
        for two_m in range(two_s, -two_s - 1, -2):
            m = HalfInt(two_m)
            res.check(rot.exchange_by_rotation_same_spin(two_s, m) == sign, f"{_s_label(two_s)} m={m}: same-spin phase")
            res.check(rot.exchange_by_rotation_opposite_spin(two_s, m) == sign, f"{_s_label(two_s)} m={m}: opposite-spin phase")
        dpi = rot.d_matrix_pi(two_s)
        for two_m in range(two_s, -two_s - 1, -2):
            expect = -1 if ((two_s - two_m) // 2) % 2 else 1
            res.check(dpi.element(HalfInt(-two_m), HalfInt(two_m)) == expect, f"{_s_label(two_s)}: d_(-m,m)(pi), m={HalfInt(two_m)}")
        square = dpi.entries @ dpi.entries
        res.check(np.array_equal(square, sign * np.eye(two_s + 1, dtype=np.int64)), f"{_s_label(two_s)}: d(pi)^2")
        res.check(
            float(np.max(np.abs(rot.d_matrix(two_s, math.pi).entries - dpi.entries))) < 1e-12,
            f"{_s_label(two_s)}: floating d(pi) vs exact",
        )
        for _ in range(trials):
            theta = rng.next() / 2**64 * 4 * math.pi - 2 * math.pi
            d = rot.d_matrix(two_s, theta).entries
            err = float(np.max(np.abs(d.T @ d - np.eye(two_s + 1))))
            res.check(err < 1e-12, f"{_s_label(two_s)}: d(theta)^T d(theta) error {err:.2e} at theta={theta!r}")
        singlet_sign = None
        if two_s >= 1:
            for _ in range(trials):
                v = rot.singlet_rotation_invariance(two_s, random_rotation(rng))
                res.check(v.invariant, f"{_s_label(two_s)}: singlet moved by {v.max_deviation:.2e}")
                singlet_sign = v.rotation_sign
        status = "ok" if res.failures == before else "FAIL"
        extra = "" if singlet_sign is None else f", singlet rotation sign {singlet_sign:+d} vs (-1)^{{2s}} = {sign:+d}"
        res.lines.append(f"rotation {_s_label(two_s)} (two_s={two_s}): exchange phases {sign:+d}{extra}: {status}")
    return res


# ---------------------------------------------------------------------------
# commands

def cmd_table(args) -> int:
    table = cg.build_table(args.two_s)
    if args.format == "json":
        print(json.dumps(table.to_json(), indent=2))
        return 0
    print(f"# C(j,m;m1,m2) for {_s_label(args.two_s)} (two_s={args.two_s}), condon-shortley convention")
    for tj, tm, a, b in table.sorted_keys():
        print(f"j={HalfInt(tj)} m={HalfInt(tm)} | m1={HalfInt(a)} m2={HalfInt(b)} : {format_value(table.entries[(tj, tm, a, b)])}")
    return 0


def cmd_verify(args) -> int:
    suites = ["cgc", "exchange", "rotation"] if args.suite == "all" else [args.suite]
    results = []
    for name in suites:
        t0 = time.perf_counter()
        if name == "cgc":
            r = suite_cgc(args.max_two_s, args.oracle_max_two_s)
        elif name == "exchange":
            r = suite_exchange(args.max_two_s, args.trials, args.seed)
        else:
            r = suite_rotation(args.max_two_s, args.trials, args.seed)
        r.duration_ms = (time.perf_counter() - t0) * 1e3
        results.append(r)
    if args.format == "json":
        print(json.dumps({"seed": args.seed, "results": [r.to_json(args.timings) for r in results]}, indent=2))
    else:
        for r in results:
            for line in r.lines:
                print(line)
            timing = f" duration_ms={r.duration_ms:.1f}" if args.timings else ""
            print(f"suite {r.suite}: cases={r.cases} failures={r.failures}{timing} {'PASS' if r.passed else 'FAIL'}")
            for d in r.details[:20]:
                print(f"  - {d}")
    return 0 if all(r.passed for r in results) else 1


def cmd_demo_rotation(args, parser) -> int:
    two_s = args.two_s
    if args.case in ("same", "opposite"):
        if args.two_m is None:
            parser.error(f"--two-m is required for --case {args.case}")
        if not valid_projection(two_s, args.two_m):
            parser.error(f"--two-m {args.two_m} is not a projection of s={HalfInt(two_s)}")
        fn = rot.exchange_by_rotation_same_spin if args.case == "same" else rot.exchange_by_rotation_opposite_spin
        phase = fn(two_s, HalfInt(args.two_m))
        expected = ex.statistics_sign(two_s)
        axis = "z" if args.case == "same" else "y"
        line = f"{_s_label(two_s)} m={HalfInt(args.two_m)} pi-rotation about {axis}: phase = {phase:+d}, expected (-1)^{{2s}} = {expected:+d}"
        if args.format == "json":
            print(json.dumps({"case": args.case, "two_s": two_s, "two_m": args.two_m, "phase": phase, "expected": expected}))
        else:
            print(line)
        return 0 if phase == expected else 1
    if two_s < 1:
        parser.error("--case singlet needs --two-s >= 1")
    if args.euler is not None:
        rotation = rot.EulerRotation(*args.euler)
    else:
        rotation = random_rotation(SplitMix64(args.seed))
    v = rot.singlet_rotation_invariance(two_s, rotation)
    if args.format == "json":
        print(json.dumps({
            "case": "singlet",
            "two_s": two_s,
            "euler": [rotation.alpha, rotation.beta, rotation.gamma],
            "max_deviation": v.max_deviation,
            "invariant": v.invariant,
            "rotation_sign": v.rotation_sign,
            "expected": v.statistics_sign,
        }))
    else:
        print(f"{_s_label(two_s)} singlet, euler (alpha, beta, gamma) = ({rotation.alpha!r}, {rotation.beta!r}, {rotation.gamma!r})")
        print(v.summary())
    return 0 if v.invariant else 1


def cmd_exchange(args, parser) -> int:
    try:
        if args.input in (None, "-"):
            raw = sys.stdin.read()
        else:
            with open(args.input) as fh:
                raw = fh.read()
        state = TwoParticleState.from_json(json.loads(raw))
    except OSError as exc:
        parser.error(f"cannot read {args.input}: {exc}")
    except (json.JSONDecodeError, ParseError, IndexOutOfRange) as exc:
        parser.error(f"invalid state JSON: {exc}")
    image = ex.exchange(state)
    print(json.dumps(image.to_json(), indent=2))
    return 0


def cmd_d_matrix(args) -> int:
    d = rot.d_matrix_pi(args.two_j) if args.theta is None else rot.d_matrix(args.two_j, args.theta)
    if args.format == "json":
        print(json.dumps(d.to_json()))
        return 0
    angle = "pi (exact)" if d.exact else repr(d.theta)
    print(f"# d^j_(m',m)({angle}) for j={HalfInt(args.two_j)}; rows m' and columns m from j down to -j")
    for row in d.entries:
        print(" ".join(f"{int(x):+d}" if d.exact else f"{x:+.15f}" for x in row))
    return 0


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"{value} must be >= 0")
    return value


def _pos_int(text: str) -> int:
    value = _nonneg_int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError("must be finite")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinstat", description="Exact two-spin algebra and spin-statistics checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="print the Clebsch-Gordan table for two spins")
    p.add_argument("--two-s", type=_nonneg_int, required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("verify", help="run exact verification suites")
    p.add_argument("--max-two-s", type=_nonneg_int, default=6)
    p.add_argument("--suite", choices=["cgc", "exchange", "rotation", "all"], default="all")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--trials", type=_pos_int, default=100)
    p.add_argument("--oracle-max-two-s", type=_nonneg_int, default=12,
                   help="largest two_s compared against the closed-form oracle")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--timings", action="store_true", help="include wall-clock durations (not deterministic)")

    p = sub.add_parser("demo-rotation", help="exchange by rotation and the singlet counterexample")
    p.add_argument("--two-s", type=_nonneg_int, required=True)
    p.add_argument("--two-m", type=int)
    p.add_argument("--case", choices=["same", "opposite", "singlet"], required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--euler", type=_finite, nargs=3, metavar=("ALPHA", "BETA", "GAMMA"))
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("exchange", help="exchange the particles of a state read as JSON")
    p.add_argument("input", nargs="?", help="state JSON file, '-' or omitted for stdin")

    p = sub.add_parser("d-matrix", help="print a Wigner d-matrix")
    p.add_argument("--two-j", type=_nonneg_int, required=True)
    p.add_argument("--theta", type=_finite, help="angle in radians; exact pi when omitted")
    p.add_argument("--format", choices=["text", "json"], default="text")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "table":
        return cmd_table(args)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "demo-rotation":
        return cmd_demo_rotation(args, parser)
    if args.command == "exchange":
        return cmd_exchange(args, parser)
    return cmd_d_matrix(args)


if __name__ == "__main__":
    sys.exit(main())
