from fractions import Fraction

import jsonschema
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.physics.quantum.cg import CG

from spinstat.cgc_engine import (
    TABLE_SCHEMA,
    CgcTable,
    build_table,
    cgc,
    check_coefficient_symmetry,
    check_ladder_consistency,
    check_oracle_equivalence,
    check_orthogonality,
    check_product_formula,
    check_ratio_reciprocity,
    highest_weight_coeffs,
    racah_oracle,
    ratio_factor,
)
from spinstat.exact_number import SignedSqrtRational as S
from spinstat.exact_number import format_value
from spinstat.spin_space import IndexOutOfRange

third, half, sixth = Fraction(1, 3), Fraction(1, 2), Fraction(1, 6)


def sym(x: S):
    return x.sign * sympy.sqrt(sympy.Rational(x.num, x.den))


def sympy_cg(two_s, tj, tm, a, b):
    s = sympy.Rational(two_s, 2)
    h = lambda t: sympy.Rational(t, 2)  # noqa: E731
    return sympy.nsimplify(CG(s, h(a), s, h(b), h(tj), h(tm)).doit())


class TestRatioFactor:
    @pytest.mark.parametrize(
        "two_s, j, n, expected",
        [(2, 0, 0, S.one()), (2, 1, 0, S.one()), (3, 1, 0, S.sqrt(Fraction(4, 3)))],
    )
    def test_examples(self, two_s, j, n, expected):
        assert ratio_factor(two_s, j, n) == expected

    @pytest.mark.parametrize("n", [-1, 2, 5])
    def test_out_of_range(self, n):
        with pytest.raises(IndexOutOfRange):
            ratio_factor(2, 1, n)

    def test_reciprocity_examples(self):
        assert check_ratio_reciprocity(2, 0).passed
        # s=3/2, j=1 has k=2, so r_0 pairs with r_1
        assert ratio_factor(3, 1, 1) == S.sqrt(Fraction(3, 4))
        v = check_ratio_reciprocity(3, 1)
        assert v.passed and v.cases == 2
        assert check_ratio_reciprocity(2, 2).cases == 0


class TestHighestWeight:
    def test_s1_j0(self):
        hw = highest_weight_coeffs(2, 0)
        assert hw.a == (S.sqrt(third), S.sqrt(third, -1), S.sqrt(third))

    def test_s1_j2(self):
        hw = highest_weight_coeffs(2, 2)
        assert hw.k == 0 and hw.a == (S.one(),)

    def test_half_j0(self):
        assert highest_weight_coeffs(1, 0).a == (S.sqrt(half, -1), S.sqrt(half))

    @given(st.integers(0, 30).flatmap(lambda s: st.tuples(st.just(s), st.integers(0, s))))
    def test_row_invariants(self, sj):
        two_s, j = sj
        hw = highest_weight_coeffs(two_s, j)
        assert sum(Fraction(x.num, x.den) for x in hw.a) == 1
        assert hw.a[hw.k].sign > 0
        flip = -1 if hw.k % 2 else 1
        assert all(hw.a[hw.k - n] == (hw.a[n] if flip > 0 else -hw.a[n]) for n in range(hw.k + 1))


class TestTable:
    def test_s1_values(self, s1_table):
        t = s1_table
        assert cgc(t, 2, 1, 1, 0) == cgc(t, 2, 1, 0, 1) == S.sqrt(half)
        assert cgc(t, 2, 0, 0, 0) == S.sqrt(Fraction(2, 3))
        assert cgc(t, 2, 0, 1, -1) == cgc(t, 2, 0, -1, 1) == S.sqrt(sixth)
        assert cgc(t, 1, 1, 1, 0) == S.sqrt(half) and cgc(t, 1, 1, 0, 1) == S.sqrt(half, -1)
        assert cgc(t, 1, 0, 1, -1) == S.sqrt(half)
        assert cgc(t, 2, 2, 1, 1) == 1

    def test_selection_rule(self, s1_table):
        assert cgc(s1_table, 1, 1, 0, 0) == 0
        assert not cgc(build_table(5), 3, 2, "1/2", "1/2")

    def test_invalid_labels(self, s1_table):
        with pytest.raises(IndexOutOfRange):
            cgc(s1_table, 3, 0, 0, 0)
        with pytest.raises(IndexOutOfRange):
            cgc(s1_table, 1, 0, 2, -2)

    def test_half_integer_labels(self):
        t = build_table(1)
        assert cgc(t, 0, 0, "1/2", "-1/2") == S.sqrt(half)
        assert cgc(t, 0, 0, "-1/2", "1/2") == S.sqrt(half, -1)

    @pytest.mark.parametrize("two_s", range(0, 5))
    def test_matches_sympy(self, two_s):
        table = build_table(two_s)
        for (tj, tm, a, b), c in table.entries.items():
            assert sympy.simplify(sym(c) - sympy_cg(two_s, tj, tm, a, b)) == 0

    def test_completeness(self):
        for two_s in range(0, 9):
            n = two_s + 1
            assert len(build_table(two_s)) == n * n * n - sum(
                1 for a in range(n) for b in range(n) for j in range(n) if abs(a + b - two_s) > j
            )

    def test_json(self):
        doc = build_table(1).to_json()
        jsonschema.validate(doc, TABLE_SCHEMA)
        assert len(doc["entries"]) == 6
        assert doc["convention"] == "condon-shortley"

    def test_text_form(self, s1_table):
        assert format_value(s1_table.get(0, 0, 0, 0)) == "-sqrt(1/3)"


class TestOracle:
    def test_examples(self):
        assert racah_oracle(2, 0, 0, 0, 0) == S.sqrt(third, -1)
        assert racah_oracle(1, 1, 1, "1/2", "1/2") == 1
        assert racah_oracle(3, 3, 3, "3/2", "3/2") == 1
        assert racah_oracle(2, 1, 1, 0, 0) == 0

    @pytest.mark.parametrize("two_s", [0, 1, 2, 5, 9])
    def test_equivalence(self, two_s):
        assert check_oracle_equivalence(build_table(two_s)).passed


class TestChecks:
    @pytest.mark.parametrize("two_s", [0, 1, 2, 3, 7, 16])
    def test_all_pass(self, two_s):
        table = build_table(two_s)
        for check in (check_coefficient_symmetry, check_orthogonality, check_ladder_consistency):
            v = check(table)
            assert v.passed and v.cases > 0, v.failures
        for j in range(two_s + 1):
            assert check_product_formula(two_s, j).passed
            assert check_ratio_reciprocity(two_s, j).passed

    def test_symmetry_examples(self, s1_table):
        t = s1_table
        assert t.get(0, 0, 2, -2) == t.get(0, 0, -2, 2)
        assert t.get(2, 0, 2, -2) == -t.get(2, 0, -2, 2)
        h = build_table(1)
        assert h.get(0, 0, 1, -1) == -h.get(0, 0, -1, 1)

    def tampered(self, two_s, key, value):
        good = build_table(two_s)
        entries = dict(good.entries)
        entries[key] = value
        return CgcTable(two_s, entries, good.highest)

    def test_detects_sign_flip(self):
        bad = self.tampered(2, (0, 0, 0, 0), S.sqrt(third))
        assert not check_orthogonality(bad).passed
        assert not check_oracle_equivalence(bad).passed

    def test_detects_asymmetry(self):
        bad = self.tampered(2, (4, 0, 2, -2), S.sqrt(half))
        assert not check_coefficient_symmetry(bad).passed
        assert not check_orthogonality(bad).passed

    def test_detects_ladder_break(self):
        bad = self.tampered(2, (0, 0, 2, -2), S.sqrt(third, -1))
        assert not check_ladder_consistency(bad).passed
