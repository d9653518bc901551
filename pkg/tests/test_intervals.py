from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import iv, mp

from cullen_sums.intervals import (
    contains_rational,
    exact_bounds,
    float_bounds,
    iabs,
    ilog,
    imax,
    interval,
    to_fraction,
    width,
    working_precision,
)

positive_fractions = st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(10**6))


def test_working_precision_restores_state():
    before = (iv.prec, mp.prec)
    with working_precision(300):
        assert iv.prec == mp.prec == 300
    assert (iv.prec, mp.prec) == before


def test_to_fraction_is_exact_for_wide_mantissas():
    with working_precision(512):
        x = iv.mpf(2) ** 200 + 1
        assert to_fraction(x.a) == 2**200 + 1


def test_contains_rational_is_not_fooled_by_float_rounding():
    big = 10**40 + 1
    with working_precision(256):
        x = interval(big)
    assert contains_rational(x, big)
    assert not contains_rational(x, big + 1)


def test_float_bounds_round_outward():
    with working_precision(200):
        third = interval(Fraction(1, 3))
    lo, hi = float_bounds(third)
    assert Fraction(lo) <= Fraction(1, 3) <= Fraction(hi)


def test_ilog_rejects_nonpositive():
    with pytest.raises(ValueError):
        ilog(iv.mpf([-1, 1]))


def test_iabs_and_imax():
    with working_precision(64):
        assert exact_bounds(iabs(iv.mpf([-3, 2]))) == (0, 3)
        assert exact_bounds(imax(iv.mpf([1, 2]), iv.mpf([0, 5]))) == (1, 5)


@given(positive_fractions, st.integers(min_value=64, max_value=512), st.integers(min_value=1, max_value=512))
def test_precision_monotonicity_for_logs(q, bits, extra):
    with working_precision(bits):
        coarse = ilog(interval(q))
    with working_precision(bits + extra):
        fine = ilog(interval(q))
    assert width(fine) <= width(coarse)
    # both enclose the same real number, so they must overlap
    assert max(exact_bounds(coarse)[0], exact_bounds(fine)[0]) <= min(exact_bounds(coarse)[1], exact_bounds(fine)[1])

@given(positive_fractions, st.integers(min_value=64, max_value=400))
def test_sqrt_enclosure_squares_back(q, bits):
    with working_precision(bits):
        r = iv.sqrt(interval(q))
        lo, hi = exact_bounds(r)
    assert lo * lo <= q <= hi * hi
