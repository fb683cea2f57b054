import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropcp.puiseux import (
    GT,
    LT,
    PuiseuxSeries,
    dominance_threshold,
    logt_map,
    ps_add,
    ps_cmp,
    ps_eval,
    ps_mul,
    ps_val,
)
from tropcp.tropical import BOTTOM, TropValue

P = PuiseuxSeries
t = PuiseuxSeries.t


def S(*terms):
    return PuiseuxSeries(terms)


rationals = st.fractions(
    min_value=-4, max_value=4, max_denominator=6
)
exponents = st.fractions(min_value=-3, max_value=3, max_denominator=4)
series = st.lists(st.tuples(exponents, rationals), max_size=5).map(PuiseuxSeries)


class TestAdd:
    def test_additive_inverse(self):
        assert ps_add(t() - P.constant(1), P.constant(1) - t()) == P.zero()

    def test_like_term_merge(self):
        assert ps_add(t(2), S((2, 3), (1, 1))) == S((2, 4), (1, 1))

    def test_disjoint_exponents(self):
        assert ps_add(S((Fraction(1, 2), 2)), P.constant(-3)) == S(
            (Fraction(1, 2), 2), (0, -3)
        )


class TestMul:
    def test_difference_of_squares(self):
        assert ps_mul(t() + P.constant(1), t() - P.constant(1)) == t(2) - P.constant(1)

    def test_monomial_inverse(self):
        assert ps_mul(t(-1), t()) == P.constant(1)

    def test_absorbing_zero(self):
        assert ps_mul(P.zero(), t(3) + P.constant(5)) == P.zero()


class TestCmp:
    def test_positive_leading(self):
        assert ps_cmp(t() - P.constant(5), P.zero()) == GT

    def test_positive_monomial(self):
        assert ps_cmp(t(-1), P.zero()) == GT

    def test_higher_exponent_wins(self):
        assert ps_cmp(S((1, 2)), t(2)) == LT


class TestVal:
    def test_greatest_exponent(self):
        assert ps_val(S((Fraction(1, 2), 2), (0, -3))) == TropValue(Fraction(1, 2))

    def test_zero_series(self):
        assert ps_val(P.zero()) is BOTTOM or ps_val(P.zero()) == BOTTOM

    def test_negative_exponents(self):
        assert ps_val(S((-2, 1), (-3, 1))) == TropValue(-2)


class TestEval:
    def test_sqrt_terms(self):
        assert ps_eval(t() + S((Fraction(1, 2), 2)), 4) == pytest.approx(8)

    def test_square(self):
        assert ps_eval(t(2) - P.constant(1), 10) == pytest.approx(99)

    def test_zero(self):
        assert ps_eval(P.zero(), 10) == 0

    def test_requires_t_above_one(self):
        with pytest.raises(ValueError):
            ps_eval(t(), 1.0)


class TestLogtMap:
    def test_entrywise(self):
        assert logt_map([100, 10], 10) == pytest.approx([2, 1])

    def test_unit(self):
        assert logt_map([1], 7) == pytest.approx([0])

    def test_monomial_valuation_recovered(self):
        t0 = 10.0**4
        assert logt_map([t0**1.5], t0) == pytest.approx([1.5])

    def test_nonpositive_entry_rejected(self):
        with pytest.raises(ValueError):
            logt_map([1.0, 0.0], 10)
        with pytest.raises(ValueError):
            logt_map([-2.0], 10)


@settings(max_examples=150, deadline=None)
@given(series, series)
def test_order_consistent_with_evaluation(a, b):
    if ps_cmp(a, b) != GT:
        return
    t0 = dominance_threshold(a, b)
    for factor in (1.0, 10.0, 100.0):
        assert ps_eval(a, t0 * factor) > ps_eval(b, t0 * factor)


@settings(max_examples=150, deadline=None)
@given(series, series)
def test_valuation_is_monotone_morphism(a, b):
    if a.sign() <= 0 or b.sign() <= 0:
        return
    from tropcp.tropical import t_add, t_mul

    assert ps_val(a * b) == t_mul(ps_val(a), ps_val(b))
    assert ps_val(a + b) == t_add(ps_val(a), ps_val(b))


@settings(max_examples=100, deadline=None)
@given(series, series, series)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + P.zero() == a
    assert a * P.constant(1) == a
    assert a + (-a) == P.zero()


def test_json_roundtrip():
    s = S((Fraction(3, 2), Fraction(-2, 7)), (0, 5))
    assert PuiseuxSeries.from_json(s.to_json()) == s
