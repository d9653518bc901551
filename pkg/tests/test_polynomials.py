from hypothesis import given
from hypothesis import strategies as st

from cullen_sums.polynomials import (
    IntegerPolynomial,
    exact_divide,
    is_irreducible,
    polynomial_gcd,
    small_factor,
    squarefree_decomposition,
)

small_ints = st.integers(min_value=-6, max_value=6)


def test_evaluation_and_derivative():
    f = IntegerPolynomial((-1, -1, 1))  # x^2 - x - 1
    assert f(2) == 1
    assert f.derivative() == IntegerPolynomial((-1, 2))
    assert str(f) == "x^2 - x - 1"


def test_counterexample_polynomial_factors():
    f = IntegerPolynomial((-2, 3, -3, 1))
    assert is_irreducible(f) is False
    g = small_factor(f)
    assert g is not None and f(2) == 0
    assert exact_divide(f, IntegerPolynomial((-2, 1))) == IntegerPolynomial((1, -1, 1))


def test_irreducible_examples():
    assert is_irreducible(IntegerPolynomial((-1, -1, 1))) is True
    assert is_irreducible(IntegerPolynomial((-1, -1, -1, 1))) is True
    assert is_irreducible(IntegerPolynomial((-5, 0, 1))) is True
    assert is_irreducible(IntegerPolynomial((-4, 0, 1))) is False


def test_squarefree_decomposition_of_cube():
    f = IntegerPolynomial.from_roots([1, 1, 1, 3])
    parts = squarefree_decomposition(f)
    assert sorted(m for _, m in parts) == [1, 3]


@given(st.lists(small_ints, min_size=1, max_size=4), st.lists(small_ints, min_size=1, max_size=4))
def test_product_is_divisible_by_each_factor(a_roots, b_roots):
    a = IntegerPolynomial.from_roots(a_roots)
    b = IntegerPolynomial.from_roots(b_roots)
    assert exact_divide(a * b, a) == b
    g = polynomial_gcd(a, b)
    common = sorted((set(a_roots) & set(b_roots)))
    assert all(g(r) == 0 for r in common)
    assert g.degree >= len(common)
