from fractions import Fraction
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cullen_sums.errors import DivisionByZeroSymbol, MissingAValues, NonPositiveGamma
from cullen_sums.heights import (
    AlgebraicNumberRef,
    LinearFormInstance,
    Product,
    Sum,
    dominant_coefficient_ref,
    height_compose,
    log_height,
    matveev_A,
    matveev_lower_bound,
    matveev_prefactor,
    positive_value,
)
from cullen_sums.intervals import lower, upper
from cullen_sums.polynomials import IntegerPolynomial
from cullen_sums.recurrence import FIBONACCI, analyze

nonzero_fractions = st.fractions(min_value=Fraction(-10**6), max_value=Fraction(10**6)).filter(lambda q: q != 0)

GOLDEN = AlgebraicNumberRef.from_polynomial(IntegerPolynomial((-1, -1, 1)), 0, "alpha")
SQRT5 = AlgebraicNumberRef.from_polynomial(IntegerPolynomial((-5, 0, 1)), 0, "sqrt5")


def close(x, value, tol=1e-12):
    return float(lower(x)) - tol <= value <= float(upper(x)) + tol


def test_known_heights():
    assert close(log_height(Fraction(3, 2)), math.log(3))
    assert close(log_height(GOLDEN), math.log((1 + 5**0.5) / 2) / 2)
    assert close(log_height(SQRT5), math.log(5) / 2)
    assert close(log_height(1), 0.0)


def test_reciprocal_cancels_exactly():
    assert upper(height_compose(Product.of((Fraction(3, 2), 1), (Fraction(2, 3), 1)))) == 0


def test_dominant_coefficient_height_is_exact():
    ref = dominant_coefficient_ref(analyze(FIBONACCI))
    # 1/f_1 = sqrt5 has minimal polynomial x^2 - 5
    assert ref.minimal_polynomial == IntegerPolynomial((-5, 0, 1))


def test_sum_adds_log_of_term_count():
    bound = height_compose(Sum((1, Product.of((GOLDEN, -3)))))
    assert float(upper(bound)) == pytest.approx(math.log(2) + 3 * math.log((1 + 5**0.5) / 2) / 2)


def test_quotient_by_zero_is_rejected():
    with pytest.raises(DivisionByZeroSymbol):
        height_compose(Product.of((GOLDEN, 1), (0, -1)))


def test_positive_value_rejects_negative_conjugate():
    negative = AlgebraicNumberRef.from_polynomial(IntegerPolynomial((-1, -1, 1)), 1)
    with pytest.raises(NonPositiveGamma):
        positive_value(negative)


def test_matveev_A_values():
    assert close(matveev_A(2, 2), 2 * math.log(2))
    assert close(matveev_A(GOLDEN, 2), math.log((1 + 5**0.5) / 2))
    assert close(matveev_A(Fraction(1, 1), 1), 0.16)


def test_prefactor_values():
    assert float(lower(matveev_prefactor(4, 2))) == pytest.approx(1.0617e14, rel=1e-4)
    assert float(lower(matveev_prefactor(3, 2))) == pytest.approx(9.697e11, rel=1e-4)


def test_linear_form_needs_a_base():
    with pytest.raises(MissingAValues):
        LinearFormInstance()


@given(nonzero_fractions)
def test_rational_height_formula(q):
    expected = math.log(max(abs(q.numerator), q.denominator))
    h = log_height(q)
    assert lower(h) >= 0
    assert close(h, expected, tol=1e-9)


@given(nonzero_fractions, st.integers(min_value=-6, max_value=6))
def test_power_rule_for_rationals(q, e):
    h = log_height(q)
    he = height_compose(Product.of((q, e)))
    assert close(he, abs(e) * float(lower(h)), tol=1e-6 * (1 + abs(e) * float(upper(h))))


def test_power_rule_for_golden_ratio_square():
    alpha_squared = AlgebraicNumberRef.from_polynomial(IntegerPolynomial((1, -3, 1)), 0)
    assert close(log_height(alpha_squared), 2 * float(lower(log_height(GOLDEN))), tol=1e-12)


@given(
    st.lists(st.fractions(min_value=Fraction(1, 5), max_value=Fraction(50)), min_size=1, max_size=4),
    st.integers(min_value=1, max_value=10**30),
    st.integers(min_value=1, max_value=10**6),
    st.integers(min_value=0, max_value=3),
)
def test_matveev_bound_is_monotone_in_B_and_A(A, B, dB, j):
    base = LinearFormInstance(exponents_bound=B, field_degree=2, A_values=tuple(A))
    bigger_B = LinearFormInstance(exponents_bound=B + dB, field_degree=2, A_values=tuple(A))
    raised = list(A)
    raised[j % len(A)] += 1
    bigger_A = LinearFormInstance(exponents_bound=B, field_degree=2, A_values=tuple(raised))
    ref = lower(matveev_lower_bound(base))
    assert lower(matveev_lower_bound(bigger_B)) <= ref
    assert lower(matveev_lower_bound(bigger_A)) <= ref
    assert upper(matveev_lower_bound(base)) < 0
