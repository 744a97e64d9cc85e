"""Clebsch-Gordan coefficients for two equal spins, built exactly.

The top row ``|j, j>`` of every multiplet comes from the highest-weight
recurrence ``a_{n+1} = -r_n a_n`` (``j+ |j,j> = 0``), normalized and with the
Condon-Shortley sign ``C(j,j; s, j-s) > 0``.  Lower rows follow by applying
``j- = s1- + s2-`` and dividing by the ladder norm.  All arithmetic is
exact; :func:`racah_oracle` is an independent closed form used to cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpq

from .exact_number import (
    NUMBER_SCHEMA,
    HalfInt,
    RadicalSum,
    SignedSqrtRational,
    accumulate_product,
    add,
    multiply,
    square,
)
from .spin_space import (
    CoupledIndex,
    IndexOutOfRange,
    UncoupledIndex,
    check_two_s,
    valid_projection,
)

__all__ = [
    "HighestWeightCoeffs",
    "CgcTable",
    "Verdict",
    "ratio_factor",
    "highest_weight_coeffs",
    "build_table",
    "cgc",
    "racah_oracle",
    "check_ratio_reciprocity",
    "check_coefficient_symmetry",
    "check_product_formula",
    "check_ladder_consistency",
    "check_orthogonality",
    "check_oracle_equivalence",
    "TABLE_SCHEMA",
]

_ONE = SignedSqrtRational.one()
_ZERO = SignedSqrtRational.zero()


@dataclass
class Verdict:
    """Outcome of an exact identity check."""

    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def merge(self, other: Verdict) -> Verdict:
        self.cases += other.cases
        self.failures.extend(other.failures)
        return self


def _k(two_s: int, j: int) -> int:
    if isinstance(j, bool) or not isinstance(j, int) or not 0 <= j <= two_s:
        raise IndexOutOfRange(f"j={j!r} must be an integer in [0, 2s] for two_s={two_s}")
    return two_s - j


def ratio_factor(two_s: int, j: int, n: int) -> SignedSqrtRational:
    """``r_n = sqrt[(2s-j-n)(j+n+1) / ((n+1)(2s-n))]`` for ``0 <= n < 2s-j``."""
    k = _k(check_two_s(two_s), j)
    if not 0 <= n <= k - 1:
        raise IndexOutOfRange(f"n={n} outside [0, {k - 1}]")
    return SignedSqrtRational(1, (two_s - j - n) * (j + n + 1), (n + 1) * (two_s - n))


@dataclass(frozen=True)
class HighestWeightCoeffs:
    """Expansion ``|j,j> = sum_n a_n |j-s+n, s-n>``, ``n = 0..k``, ``k = 2s-j``."""

    two_s: int
    j: int
    a: tuple[SignedSqrtRational, ...]

    @property
    def k(self) -> int:
        return self.two_s - self.j

    def index(self, n: int) -> UncoupledIndex:
        """Twice-valued ``(m1, m2)`` carried by ``a_n``."""
        return UncoupledIndex(2 * self.j - self.two_s + 2 * n, self.two_s - 2 * n)


def highest_weight_coeffs(two_s: int, j: int) -> HighestWeightCoeffs:
    k = _k(check_two_s(two_s), j)
    a = [_ONE]
    for n in range(k):
        a.append(-multiply(ratio_factor(two_s, j, n), a[n]))
    norm = sum((square(x) for x in a), Fraction(0))
    scale = SignedSqrtRational.sqrt(1 / norm, sign=a[k].sign)
    return HighestWeightCoeffs(two_s, j, tuple(multiply(x, scale) for x in a))


class CgcTable:
    """All ``C(j,m;m1,m2)`` with ``m = m1+m2`` for a fixed spin ``s``.

    Entries are keyed by twice-values ``(two_j, two_m, two_m1, two_m2)``;
    coefficients that vanish by accident are stored too, so the key set
    is the full set of valid index combinations.
    """

    def __init__(self, two_s: int, entries: dict, highest: dict):
        self.two_s = two_s
        self.entries = entries
        self.highest = highest
        self._radicals: dict = {}

    def get(self, two_j: int, two_m: int, two_m1: int, two_m2: int) -> SignedSqrtRational:
        if two_m != two_m1 + two_m2:
            return _ZERO
        return self.entries[(two_j, two_m, two_m1, two_m2)]

    def radical(self, two_j: int, two_m: int, two_m1: int, two_m2: int) -> RadicalSum:
        """The entry as a :class:`RadicalSum` (cached)."""
        key = (two_j, two_m, two_m1, two_m2)
        r = self._radicals.get(key)
        if r is None:
            r = self._radicals[key] = RadicalSum.coerce(self.entries[key])
        return r

    def js_for(self, two_m: int) -> range:
        """Twice-values of ``j`` with ``|m| <= j <= 2s``, descending."""
        return range(2 * self.two_s, abs(two_m) - 1, -2)

    def pairs_for(self, two_m: int) -> list[tuple[int, int]]:
        """Valid ``(two_m1, two_m2)`` with ``m1 + m2 = m``, ``m1`` descending."""
        s = self.two_s
        lo, hi = max(-s, two_m - s), min(s, two_m + s)
        return [(m1, two_m - m1) for m1 in range(hi, lo - 1, -2)]

    def block(self, two_m: int) -> tuple[list[int], list[tuple[int, int]], list[list[SignedSqrtRational]]]:
        """Square matrix of coefficients at fixed ``m``: rows ``j``, columns ``(m1, m2)``."""
        js = list(self.js_for(two_m))
        pairs = self.pairs_for(two_m)
        rows = [[self.entries[(tj, two_m, a, b)] for a, b in pairs] for tj in js]
        return js, pairs, rows

    def total_projections(self) -> range:
        return range(2 * self.two_s, -2 * self.two_s - 1, -2)

    def __len__(self) -> int:
        return len(self.entries)

    def sorted_keys(self) -> list[tuple[int, int, int, int]]:
        return sorted(self.entries, key=lambda k: (-k[0], -k[1], -k[2]))

    def to_json(self) -> dict:
        return {
            "two_s": self.two_s,
            "convention": "condon-shortley",
            "entries": [
                {"two_j": tj, "two_m": tm, "two_m1": a, "two_m2": b, "amp": self.entries[(tj, tm, a, b)].to_json()}
                for tj, tm, a, b in self.sorted_keys()
            ],
        }


@lru_cache(maxsize=64)
def build_table(two_s: int) -> CgcTable:
    """Full table by highest-weight recurrence plus ladder descent (cached)."""
    check_two_s(two_s)
    s2 = two_s
    entries: dict = {}
    highest: dict = {}
    for j in range(two_s, -1, -1):
        tj = 2 * j
        hw = highest_weight_coeffs(two_s, j)
        highest[j] = hw
        row = {hw.index(n): hw.a[n] for n in range(hw.k + 1)}
        tm = tj
        while True:
            for (a, b), v in row.items():
                entries[(tj, tm, a, b)] = v
            if tm == -tj:
                break
            # j-|j,m> / sqrt((j+m)(j-m+1)), m in twice units
            inv_norm = SignedSqrtRational(1, 4, (tj + tm) * (tj - tm + 2))
            new = {}
            for a in range(min(s2, tm - 2 + s2), max(-s2, tm - 2 - s2) - 1, -2):
                b = tm - 2 - a
                total = _ZERO
                v = row.get((a + 2, b))
                if v:
                    # s1- from m1+1: sqrt((s+m1+1)(s-m1))
                    total = multiply(v, SignedSqrtRational(1, (s2 + a + 2) * (s2 - a), 4))
                v = row.get((a, b + 2))
                if v:
                    total = add(total, multiply(v, SignedSqrtRational(1, (s2 + b + 2) * (s2 - b), 4)))
                new[(a, b)] = multiply(total, inv_norm)
            row = new
            tm -= 2
    return CgcTable(two_s, entries, highest)


def _coerce_twice(x) -> int:
    return HalfInt.coerce(x).twice


def cgc(table: CgcTable, j, m, m1, m2) -> SignedSqrtRational:
    """``C(j,m;m1,m2)``; accepts ints, Fractions, strings or HalfInt."""
    tj, tm, a, b = (_coerce_twice(x) for x in (j, m, m1, m2))
    s2 = table.two_s
    if not (valid_projection(s2, a) and valid_projection(s2, b)):
        raise IndexOutOfRange(f"(m1, m2) = ({m1}, {m2}) invalid for two_s={s2}")
    CoupledIndex(tj, tm).validate(s2)
    return table.get(tj, tm, a, b)


# ---------------------------------------------------------------------------
# independent closed form

_FACT = [1]


def _fact(n: int) -> int:
    while len(_FACT) <= n:
        _FACT.append(_FACT[-1] * len(_FACT))
    return _FACT[n]


def racah_oracle(two_s: int, j, m, m1, m2) -> SignedSqrtRational:
    """Racah's closed form of ``C(j,m;m1,m2)`` for two spins ``s``."""
    tj, tm, ta, tb = (_coerce_twice(x) for x in (j, m, m1, m2))
    s2 = check_two_s(two_s)
    if not (valid_projection(s2, ta) and valid_projection(s2, tb)):
        raise IndexOutOfRange(f"(m1, m2) invalid for two_s={s2}")
    CoupledIndex(tj, tm).validate(s2)
    if tm != ta + tb:
        return _ZERO
    J, M = tj // 2, tm // 2
    # integer-valued combinations of s and the projections
    s_m1, s_p1 = (s2 - ta) // 2, (s2 + ta) // 2
    s_m2, s_p2 = (s2 - tb) // 2, (s2 + tb) // 2
    f = _fact
    pre = Fraction(
        (2 * J + 1) * f(s2 - J) * f(J) * f(J) * f(J + M) * f(J - M) * f(s_m1) * f(s_p1) * f(s_m2) * f(s_p2),
        f(s2 + J + 1),
    )
    # k-sum bounds: every factorial argument nonnegative
    lo = max(0, s_m1 - J, s_p2 - J)  # j-s+m1+k >= 0, j-s-m2+k >= 0
    hi = min(s2 - J, s_m1, s_p2)
    total = Fraction(0)
    for k in range(lo, hi + 1):
        den = f(k) * f(s2 - J - k) * f(s_m1 - k) * f(s_p2 - k) * f(J - s_m1 + k) * f(J - s_p2 + k)
        total += Fraction(-1 if k % 2 else 1, den)
    if total == 0:
        return _ZERO
    return SignedSqrtRational(1 if total > 0 else -1, *_frac_parts(pre * total * total))


def _frac_parts(q: Fraction) -> tuple[int, int]:
    return q.numerator, q.denominator


# ---------------------------------------------------------------------------
# identity checks

def check_ratio_reciprocity(two_s: int, j: int) -> Verdict:
    """``r_{k-1-n} * r_n == 1`` for all ``n``."""
    k = _k(check_two_s(two_s), j)
    v = Verdict(f"ratio-reciprocity two_s={two_s} j={j}")
    for n in range(k):
        v.cases += 1
        prod = multiply(ratio_factor(two_s, j, k - 1 - n), ratio_factor(two_s, j, n))
        if prod != _ONE:
            v.fail(f"two_s={two_s} j={j} n={n}: r_(k-1-n)*r_n = {prod}")
    return v


def check_coefficient_symmetry(table: CgcTable) -> Verdict:
    """Mirror symmetry of each ``a_n`` row and the spin-swap symmetry of every entry."""
    s2 = table.two_s
    v = Verdict(f"coefficient-symmetry two_s={s2}")
    for j, hw in table.highest.items():
        k = hw.k
        sign = -1 if k % 2 else 1
        for n in range(k + 1):
            v.cases += 1
            lhs, rhs = hw.a[k - n], hw.a[n]
            if lhs != (rhs if sign > 0 else -rhs):
                v.fail(f"two_s={s2} j={j}: a_{k - n}={lhs} but a_{n}={rhs}, k={k}")
    for (tj, tm, a, b), c in table.entries.items():
        v.cases += 1
        sign = -1 if (s2 - tj // 2) % 2 else 1
        other = table.entries[(tj, tm, b, a)]
        if c != (other if sign > 0 else -other):
            v.fail(f"two_s={s2} C({tj}/2,{tm}/2;{a}/2,{b}/2)={c} vs swapped {other}")
    return v


def check_product_formula(two_s: int, j: int) -> Verdict:
    """``a_n = (-1)^n a_0 prod_{l<n} r_l`` against the stored recurrence output."""
    hw = build_table(two_s).highest[j]
    v = Verdict(f"product-formula two_s={two_s} j={j}")
    acc = hw.a[0]
    for n in range(hw.k + 1):
        v.cases += 1
        expect = acc if n % 2 == 0 else -acc
        if hw.a[n] != expect:
            v.fail(f"two_s={two_s} j={j} n={n}: {hw.a[n]} != {expect}")
        if n < hw.k:
            acc = multiply(acc, ratio_factor(two_s, j, n))
    return v


def check_ladder_consistency(table: CgcTable) -> Verdict:
    """``(s1+ + s2+)|j,j> == 0`` on the reconstructed top rows."""
    s2 = table.two_s
    v = Verdict(f"ladder-consistency two_s={s2}")
    for j in table.highest:
        tj = 2 * j
        image: dict[tuple[int, int], dict] = {}
        for a, b in table.pairs_for(tj):
            c = table.radical(tj, tj, a, b)
            if not c:
                continue
            # s+|m> = sqrt((s-m)(s+m+1)) |m+1>, twice units
            if a < s2:
                f = RadicalSum.coerce(SignedSqrtRational(1, (s2 - a) * (s2 + a + 2), 4))
                accumulate_product(image.setdefault((a + 2, b), {}), f, c)
            if b < s2:
                f = RadicalSum.coerce(SignedSqrtRational(1, (s2 - b) * (s2 + b + 2), 4))
                accumulate_product(image.setdefault((a, b + 2), {}), f, c)
        v.cases += 1
        leftover = {k: RadicalSum._wrap(t) for k, t in image.items()}
        bad = {k: x for k, x in leftover.items() if x}
        if bad:
            v.fail(f"two_s={s2} j={j}: j+|j,j> has components {bad}")
    return v


def check_oracle_equivalence(table: CgcTable) -> Verdict:
    s2 = table.two_s
    v = Verdict(f"oracle-equivalence two_s={s2}")
    for (tj, tm, a, b), c in table.entries.items():
        v.cases += 1
        o = racah_oracle(s2, HalfInt(tj), HalfInt(tm), HalfInt(a), HalfInt(b))
        if o != c:
            v.fail(f"two_s={s2} C({tj}/2,{tm}/2;{a}/2,{b}/2): table {c}, oracle {o}")
    return v


def check_orthogonality(table: CgcTable) -> Verdict:
    """Rows and columns of every fixed-``m`` block are exactly orthonormal."""
    v = Verdict(f"orthogonality two_s={table.two_s}")
    for tm in table.total_projections():
        js, pairs, rows = table.block(tm)
        v.cases += 2
        for msg in _orthonormal_failures(rows):
            v.fail(f"two_s={table.two_s} m={tm // 2}: {msg}")
    return v


def _orthonormal_failures(rows: list[list[SignedSqrtRational]]) -> list[str]:
    """Exact test of ``M M^T = I`` and ``M^T M = I``.

    Entries of a coupling block factor as ``sqrt(u_i) * sqrt(w_c) * rho_ic``
    with rational ``rho``.  Once found, both Gram matrices reduce to rational
    matrix products.  Blocks without that structure use the generic field
    arithmetic.
    """
    fact = _rank_one_radicals(rows)
    if fact is None:
        return _orthonormal_failures_generic(rows)
    u, w, rho = fact
    n = len(rows)
    bad = []
    # (M M^T)_{ii'} = sqrt(u_i u_i') * sum_c w_c rho_ic rho_i'c
    weighted = [[(w[c] or 0) * rho[i][c] for c in range(n)] for i in range(n)]
    for i in range(n):
        for i2 in range(i, n):
            g = sum(weighted[i][c] * rho[i2][c] for c in range(n))
            if i == i2:
                if u[i] is None or u[i] * g != 1:
                    bad.append(f"row {i} has norm^2 {(u[i] or 0) * g}")
            elif g != 0:
                bad.append(f"rows {i},{i2} overlap")
    # (M^T M)_{cc'} = sqrt(w_c w_c') * sum_i u_i rho_ic rho_ic'
    weighted = [[(u[i] or 0) * rho[i][c] for i in range(n)] for c in range(n)]
    for c in range(n):
        for c2 in range(c, n):
            g = sum(weighted[c][i] * rho[i][c2] for i in range(n))
            if c == c2:
                if w[c] is None or w[c] * g != 1:
                    bad.append(f"column {c} has norm^2 {(w[c] or 0) * g}")
            elif g != 0:
                bad.append(f"columns {c},{c2} overlap")
    return bad


def _rank_one_radicals(rows):
    """Find ``u``, ``w`` (mpq) and rational ``rho`` with ``M_ic = rho_ic sqrt(u_i w_c)``."""
    n = len(rows)
    sq = [[mpq(x.num, x.den) for x in r] for r in rows]
    u: list = [None] * n
    w: list = [None] * n
    for start in range(n):
        if u[start] is not None or not any(rows[start][c].sign for c in range(n)):
            continue
        u[start] = mpq(1)
        todo = [("r", start)]
        while todo:
            kind, idx = todo.pop()
            if kind == "r":
                for c in range(n):
                    if rows[idx][c].sign and w[c] is None:
                        w[c] = sq[idx][c] / u[idx]
                        todo.append(("c", c))
            else:
                for i in range(n):
                    if rows[i][idx].sign and u[i] is None:
                        u[i] = sq[i][idx] / w[idx]
                        todo.append(("r", i))
    rho = [[mpq(0)] * n for _ in range(n)]
    for i in range(n):
        for c in range(n):
            x = rows[i][c]
            if not x.sign:
                continue
            t = sq[i][c] / (u[i] * w[c])
            a, b = int(t.numerator), int(t.denominator)
            ra, rb = math.isqrt(a), math.isqrt(b)
            if ra * ra != a or rb * rb != b:
                return None
            rho[i][c] = mpq(x.sign * ra, rb)
    return u, w, rho


def _orthonormal_failures_generic(rows) -> list[str]:
    n = len(rows)
    R = [[RadicalSum.coerce(x) for x in r] for r in rows]
    bad = []
    for i in range(n):
        for i2 in range(i, n):
            acc: dict = {}
            for c in range(n):
                accumulate_product(acc, R[i][c], R[i2][c])
            if RadicalSum._wrap(acc) != (1 if i == i2 else 0):
                bad.append(f"rows {i},{i2}")
    for c in range(n):
        for c2 in range(c, n):
            acc = {}
            for i in range(n):
                accumulate_product(acc, R[i][c], R[i][c2])
            if RadicalSum._wrap(acc) != (1 if c == c2 else 0):
                bad.append(f"columns {c},{c2}")
    return bad


TABLE_SCHEMA = {
    "type": "object",
    "required": ["two_s", "convention", "entries"],
    "properties": {
        "two_s": {"type": "integer", "minimum": 0},
        "convention": {"const": "condon-shortley"},
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["two_j", "two_m", "two_m1", "two_m2", "amp"],
                "properties": {
                    "two_j": {"type": "integer", "minimum": 0},
                    "two_m": {"type": "integer"},
                    "two_m1": {"type": "integer"},
                    "two_m2": {"type": "integer"},
                    "amp": NUMBER_SCHEMA,
                },
            },
        },
    },
}
