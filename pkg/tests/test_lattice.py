from fractions import Fraction
import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from mpmath import iv, mp

from cullen_sums.errors import ScaleCapExceeded, SingularBasis
from cullen_sums.intervals import exact_bounds, interval, working_precision
from cullen_sums.lattice import (
    IntegerLattice,
    ReductionProblem,
    is_lll_reduced,
    lll_reduce,
    reduce_inhomogeneous,
    shortest_vector_floor,
    fibonacci_reduction_campaign,
)

entries = st.integers(min_value=-12, max_value=12)


def square_matrices(m):
    return st.lists(st.lists(entries, min_size=m, max_size=m), min_size=m, max_size=m)


def nonsingular(rows):
    try:
        return IntegerLattice.from_rows(rows)
    except SingularBasis:
        return None


def test_identity_like_reduction():
    reduced = lll_reduce(IntegerLattice(((1, 0), (10**6, 1))))
    assert sorted(reduced.columns) == [(0, 1), (1, 0)]
    assert shortest_vector_floor(reduced) == pytest.approx(2**-0.5, abs=1e-12)


def test_singular_basis_rejected():
    with pytest.raises(SingularBasis):
        IntegerLattice(((1, 2), (2, 4)))


def test_determinant_and_membership():
    lat = IntegerLattice(((2, 0), (1, 3)))
    assert abs(lat.determinant()) == 6
    assert lat.contains((3, 3)) and not lat.contains((1, 0))


@given(st.integers(min_value=2, max_value=4).flatmap(square_matrices))
def test_lll_preserves_lattice(rows):
    lat = nonsingular(rows)
    assume(lat is not None)
    reduced = lll_reduce(lat)
    assert reduced.same_lattice(lat)
    assert abs(reduced.determinant()) == abs(lat.determinant())
    assert is_lll_reduced(reduced)


@given(square_matrices(2))
def test_shortest_vector_floor_against_brute_force(rows):
    lat = nonsingular(rows)
    assume(lat is not None)
    reduced = lll_reduce(lat)
    b1 = reduced.columns[0]
    radius = math.isqrt(b1[0] ** 2 + b1[1] ** 2) + 1
    shortest = min(
        x * x + y * y
        for x in range(-radius, radius + 1)
        for y in range(-radius, radius + 1)
        if (x, y) != (0, 0) and lat.contains((x, y))
    )
    floor = shortest_vector_floor(reduced)
    assert floor**2 <= shortest
    # LLL guarantee in dimension 2: |b_1|^2 <= 2 * shortest^2
    assert b1[0] ** 2 + b1[1] ** 2 <= 2 * shortest


def toy_problem(beta, bound=10):
    with working_precision(256):
        return ReductionProblem((iv.log(iv.mpf(2)),), (bound,), interval(beta), (1, 2))


def test_toy_reduction_is_sound():
    out = reduce_inhomogeneous(toy_problem(Fraction(1, 10)))
    assert out.success
    true_min = min(abs(b * math.log(2) + 0.1) for b in range(-10, 11))
    assert 0 < float(out.lambda_lower) <= true_min


def test_vanishing_form_reports_failure():
    out = reduce_inhomogeneous(toy_problem(0))
    assert not out.success and out.new_bound is None


def test_scale_cap_raises():
    with working_precision(256):
        wide = ReductionProblem(
            (iv.log(iv.mpf(2)), -iv.log(iv.mpf(3))), (1000, 1000), iv.mpf([0, 1]), (1, 2)
        )
    with pytest.raises(ScaleCapExceeded):
        reduce_inhomogeneous(wide, max_retries=2)


@settings(max_examples=25)
@given(
    st.lists(st.integers(min_value=2, max_value=40), min_size=2, max_size=2, unique=True),
    st.fractions(min_value=Fraction(-3), max_value=Fraction(3)),
    st.integers(min_value=2, max_value=15),
)
def test_lambda_lower_bound_is_sound_by_sampling(primes, beta, bound):
    with working_precision(256):
        thetas = (iv.log(iv.mpf(primes[0])), -iv.log(iv.mpf(primes[1])))
        problem = ReductionProblem(thetas, (bound, bound), interval(beta), (1, 2))
    try:
        out = reduce_inhomogeneous(problem, max_retries=4)
    except ScaleCapExceeded:
        return
    if not out.success:
        return
    lam = exact_bounds(out.lambda_lower)[0]
    with mp.workprec(256):
        a, b = mp.log(primes[0]), mp.log(primes[1])
        smallest = min(
            abs(x * a - y * b + mp.mpf(beta.numerator) / beta.denominator)
            for x in range(-bound, bound + 1)
            for y in range(-bound, bound + 1)
        )
        assert mp.mpf(lam.numerator) / lam.denominator <= smallest


def test_small_campaign_runs_end_to_end():
    report = fibonacci_reduction_campaign({"n1_max": 300, "ell_max": 200}, stage=1)
    assert report.gap_bound is not None and report.gap_bound < 300
    stage2 = fibonacci_reduction_campaign({"n1_max": 300, "ell_max": 200}, stage=2, gap_bound=6)
    assert stage2.absolute_bound < 300
    assert stage2.to_json()["subproblems"] == len(stage2.records)


def test_stage_two_requires_gap():
    with pytest.raises(ValueError):
        fibonacci_reduction_campaign({"n1_max": 300, "ell_max": 200}, stage=2)
