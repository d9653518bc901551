from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cullen_sums.errors import RepeatedRoots
from cullen_sums.intervals import contains_rational, contains_zero, exact_bounds, width, working_precision
from cullen_sums.polynomials import IntegerPolynomial
from cullen_sums.recurrence import (
    COUNTEREXAMPLE,
    FIBONACCI,
    RecurrenceSpec,
    analyze,
    binet_coefficients,
    char_poly,
    check_hypotheses,
    classify_dominance,
    eval_terms,
    factor_witness,
    growth_constant,
    isolate_roots,
)

TRIBONACCI = RecurrenceSpec((1, 1, 1), (0, 0, 1))
PELL = RecurrenceSpec((2, 1), (0, 1))


def test_fibonacci_terms():
    assert eval_terms(FIBONACCI, 0, 10) == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    assert eval_terms(FIBONACCI, 5, 7) == [5, 8, 13]


def test_spec_validation():
    with pytest.raises(ValueError):
        RecurrenceSpec((1, 0), (0, 1))
    with pytest.raises(ValueError):
        RecurrenceSpec((1, 1), (0,))
    with pytest.raises(ValueError):
        RecurrenceSpec((1, 1), (0, 0))


def test_spec_json_roundtrip():
    assert RecurrenceSpec.from_json(TRIBONACCI.to_json()) == TRIBONACCI
    with pytest.raises(ValueError, match="order"):
        RecurrenceSpec.from_json({"coefficients": ["1"], "initials": ["1"]})


def test_char_poly():
    assert char_poly(FIBONACCI) == IntegerPolynomial((-1, -1, 1))
    assert char_poly(COUNTEREXAMPLE) == IntegerPolynomial((-2, 3, -3, 1))


def test_roots_are_disjoint_and_ordered_by_modulus():
    roots = isolate_roots(char_poly(TRIBONACCI))
    assert len(roots) == 3
    assert all(a.disjoint_from(b) for i, a in enumerate(roots) for b in roots[i + 1:])
    assert roots[0].is_real and roots[0].modulus.a > 1.83 and roots[0].modulus.b < 1.84


def test_repeated_roots_are_rejected_for_binet():
    with pytest.raises(RepeatedRoots):
        binet_coefficients(RecurrenceSpec((2, -1), (0, 1)))


def test_fibonacci_binet_coefficients():
    d = analyze(FIBONACCI)
    f1 = d.dominant_coefficient
    assert contains_zero(f1.imag)
    lo, hi = exact_bounds(f1.real)
    assert lo < Fraction(4472136, 10**7) < hi + Fraction(1, 10**6)
    assert width(f1.real) < 1e-60
    report = classify_dominance(d)
    assert report.has_dominant and report.dominant_real_gt1
    assert report.delta.a > 0.99  # |beta| < 1, so delta is capped


def test_counterexample_is_degenerate():
    d = binet_coefficients(COUNTEREXAMPLE)
    assert d.degenerate
    assert d.dominant_index in d.zero_coefficients
    report = check_hypotheses(COUNTEREXAMPLE)
    assert report.irreducible is False and report.f1_nonzero is False and not report.ok
    g, h = factor_witness(char_poly(COUNTEREXAMPLE))
    assert g * h == char_poly(COUNTEREXAMPLE)


def test_hypotheses_hold_for_standard_sequences():
    for spec in (FIBONACCI, PELL, TRIBONACCI):
        assert check_hypotheses(spec).ok


def test_growth_constant_bounds_terms():
    with working_precision(128):
        c1 = growth_constant(analyze(TRIBONACCI), check_terms=300)
    assert c1.b < 1


@given(st.sampled_from([FIBONACCI, PELL, TRIBONACCI, COUNTEREXAMPLE]), st.integers(min_value=0, max_value=500))
def test_binet_reconstruction_contains_exact_term(spec, n):
    decomp = analyze(spec)
    value = decomp.term(n)
    exact = eval_terms(spec, n, n)[0]
    assert contains_rational(value.real, exact)
    assert contains_zero(value.imag)


@given(st.integers(min_value=64, max_value=256), st.integers(min_value=1, max_value=256))
def test_root_enclosures_shrink_with_precision(bits, extra):
    poly = char_poly(TRIBONACCI)
    coarse = isolate_roots(poly, bits)[0]
    fine = isolate_roots(poly, bits + extra)[0]
    assert fine.radius <= coarse.radius
    assert not fine.disjoint_from(coarse)
