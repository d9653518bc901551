"""Absolute logarithmic heights and Matveev's lower bound for linear forms.

Algebraic numbers are carried as :class:`AlgebraicNumberRef` (minimal
polynomial plus certified conjugate enclosures).  Composite numbers such as
``ell / f_1`` are expressions (:class:`Product`, :class:`Sum`) whose heights are
bounded by subadditivity rather than by computing new minimal polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

from mpmath import iv, mp

from .errors import DivisionByZeroSymbol, MissingAValues, NonPositiveGamma, PrecisionExhausted
from .intervals import (
    DEFAULT_PRECISION,
    MAX_PRECISION,
    cinterval,
    contains_zero,
    iabs,
    ilog,
    imax,
    interval,
    upper,
    working_precision,
)
from .polynomials import IntegerPolynomial, is_irreducible, squarefree_decomposition

MATVEEV_FLOOR = "0.16"


@dataclass(frozen=True)
class AlgebraicNumberRef:
    """An algebraic number pinned down by its minimal polynomial and a conjugate.

    ``conjugates`` are disjoint complex enclosures of all roots of
    ``minimal_polynomial``; ``selected`` says which one is meant.
    """

    minimal_polynomial: IntegerPolynomial
    conjugates: tuple
    selected: int
    label: str = ""

    def __post_init__(self):
        p = self.minimal_polynomial
        if p.leading <= 0 or p.content() != 1:
            raise ValueError("minimal polynomial must be primitive with positive leading coefficient")
        if len(self.conjugates) != p.degree:
            raise ValueError(f"expected {p.degree} conjugates, got {len(self.conjugates)}")
        if not 0 <= self.selected < p.degree:
            raise ValueError("selected conjugate index out of range")

    @property
    def degree(self) -> int:
        return self.minimal_polynomial.degree

    @property
    def value(self):
        return self.conjugates[self.selected]

    @classmethod
    def from_polynomial(
        cls,
        poly: IntegerPolynomial,
        select: Union[int, Callable] = 0,
        label: str = "",
        precision: int = DEFAULT_PRECISION,
        check_irreducible: bool = True,
    ) -> "AlgebraicNumberRef":
        """Build a reference from an irreducible polynomial.

        ``select`` is either an index into the roots (ordered by decreasing
        modulus, as returned by root isolation) or a predicate on a root
        enclosure that must match exactly one root.
        """
        from .recurrence import isolate_roots

        parts = squarefree_decomposition(poly)
        if len(parts) != 1 or parts[0][1] != 1:
            raise ValueError(f"{poly} is not squarefree")
        if check_irreducible and is_irreducible(poly) is False:
            raise ValueError(f"{poly} is reducible over the rationals")
        if poly.leading < 0:
            poly = IntegerPolynomial(tuple(-c for c in poly.coefficients))
        poly = poly.primitive()
        roots = isolate_roots(poly, precision)
        with working_precision(precision):
            boxes = tuple(r.enclosure for r in roots)
        if callable(select):
            hits = [i for i, r in enumerate(roots) if select(r)]
            if len(hits) != 1:
                raise ValueError(f"selector matched {len(hits)} roots of {poly}")
            select = hits[0]
        return cls(poly, boxes, select, label or str(poly))

    @classmethod
    def rational(cls, q) -> "AlgebraicNumberRef":
        q = Fraction(q)
        poly = IntegerPolynomial((-q.numerator, q.denominator))
        return cls(poly, (cinterval(interval(q)),), 0, str(q))


@dataclass(frozen=True)
class Product:
    """``prod base_j ** exponent_j`` over numbers, refs or nested expressions."""

    factors: tuple

    @classmethod
    def of(cls, *pairs) -> "Product":
        return cls(tuple((b, int(e)) for b, e in pairs))


@dataclass(frozen=True)
class Sum:
    """``sum terms`` (used for ``1 + alpha**-d``-type factors)."""

    terms: tuple = field(default=())


Number = Union[int, Fraction, AlgebraicNumberRef, Product, Sum]


def _rational_value(x) -> Fraction | None:
    """Exact rational value of an expression, or None if it is not rational."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, AlgebraicNumberRef):
        p = x.minimal_polynomial
        if p.degree == 1:
            return Fraction(-p.coefficients[0], p.coefficients[1])
        return None
    if isinstance(x, Product):
        out = Fraction(1)
        for base, e in x.factors:
            v = _rational_value(base)
            if v is None:
                return None
            if v == 0 and e < 0:
                raise DivisionByZeroSymbol("quotient by zero in height expression")
            out *= v**e
        return out
    if isinstance(x, Sum):
        vals = [_rational_value(t) for t in x.terms]
        if any(v is None for v in vals):
            return None
        return sum(vals, Fraction(0))
    raise TypeError(f"unsupported height operand {x!r}")


def rational_height(q) -> object:
    """``log max(|p|, q)`` for ``p/q`` in lowest terms."""
    q = Fraction(q)
    m = max(abs(q.numerator), q.denominator)
    return ilog(interval(m)) if m > 1 else iv.mpf(0)


def log_height(x: Number, precision: int = DEFAULT_PRECISION):
    """Rigorous enclosure of the absolute logarithmic height.

    Rationals use the exact ``log max(|p|, q)`` formula.  References use the
    Mahler-measure form over the conjugate enclosures.
    """
    q = _rational_value(x) if not isinstance(x, (Product, Sum)) else None
    if q is not None:
        with working_precision(precision):
            return rational_height(q)
    if not isinstance(x, AlgebraicNumberRef):
        return height_compose(x, precision)
    with working_precision(precision):
        total = ilog(interval(x.minimal_polynomial.leading)) if x.minimal_polynomial.leading > 1 else iv.mpf(0)
        for z in x.conjugates:
            m = iabs(z)
            if not upper(m) < mp.inf:
                raise PrecisionExhausted("conjugate enclosure is unbounded")
            big = imax(1, m)
            total = total + iv.log(big)
        return total / x.degree


def height_compose(expr: Number, precision: int = DEFAULT_PRECISION):
    """Upper bound for the height of a product/quotient/sum expression.

    Pure rationals are evaluated exactly; otherwise ``h(xy) <= h(x) + h(y)``,
    ``h(x**e) = |e| h(x)`` and ``h(x_1 + ... + x_m) <= log m + sum h(x_i)``.
    The returned interval's upper end is the bound; its lower end is 0.
    """
    q = _rational_value(expr)
    if q is not None:
        with working_precision(precision):
            return rational_height(q)
    with working_precision(precision):
        if isinstance(expr, AlgebraicNumberRef):
            return log_height(expr, precision)
        if isinstance(expr, Product):
            total = iv.mpf(0)
            for base, e in expr.factors:
                if e == 0:
                    continue
                if e < 0 and _is_zero(base):
                    raise DivisionByZeroSymbol(f"quotient by zero: {base!r}")
                total = total + abs(e) * height_compose(base, precision)
            return iv.mpf([0, upper(total)])
        if isinstance(expr, Sum):
            total = ilog(interval(len(expr.terms))) if len(expr.terms) > 1 else iv.mpf(0)
            for t in expr.terms:
                total = total + height_compose(t, precision)
            return iv.mpf([0, upper(total)])
    raise TypeError(f"unsupported height operand {expr!r}")


def _is_zero(x) -> bool:
    if isinstance(x, AlgebraicNumberRef):
        return x.minimal_polynomial.coefficients == (0, 1)
    try:
        return _rational_value(x) == 0
    except DivisionByZeroSymbol:
        return False


def evaluate(expr: Number, precision: int = DEFAULT_PRECISION):
    """Complex interval enclosing the designated value of an expression."""
    with working_precision(precision):
        if isinstance(expr, (int, Fraction)):
            return cinterval(interval(Fraction(expr)))
        if isinstance(expr, AlgebraicNumberRef):
            return expr.value
        if isinstance(expr, Product):
            out = iv.mpc(1, 0)
            for base, e in expr.factors:
                v = evaluate(base, precision)
                if e < 0:
                    if contains_zero(v):
                        raise DivisionByZeroSymbol(f"quotient by (possibly) zero value {base!r}")
                    v = 1 / v
                for _ in range(abs(e)):
                    out = out * v
            return out
        if isinstance(expr, Sum):
            out = iv.mpc(0, 0)
            for t in expr.terms:
                out = out + evaluate(t, precision)
            return out
    raise TypeError(f"unsupported operand {expr!r}")


def positive_value(gamma: Number, precision: int = DEFAULT_PRECISION):
    """Real interval of ``gamma`` after certifying it is a positive real."""
    with working_precision(precision):
        v = evaluate(gamma, precision)
        if not contains_zero(v.imag) or not v.real.a > 0:
            raise NonPositiveGamma(f"{gamma!r} is not certified positive real (enclosure {v})")
        return interval(v.real)


def matveev_A(gamma: Number, degree: int, precision: int = DEFAULT_PRECISION):
    """``max{D h(gamma), |log gamma|, 0.16}`` rounded outward."""
    with working_precision(precision):
        value = positive_value(gamma, precision)
        h = height_compose(gamma, precision)
        return imax(degree * h, iabs(iv.log(value)), iv.mpf(MATVEEV_FLOOR))


@dataclass(frozen=True)
class LinearFormInstance:
    """Data for ``Lambda = gamma_1**b_1 ... gamma_s**b_s - 1``.

    In replay mode ``A_values`` overrides the computed ``A_j`` verbatim.
    """

    gammas: tuple = ()
    exponents_bound: object = 1
    field_degree: int = 1
    exponents: tuple | None = None
    A_values: tuple | None = None

    def __post_init__(self):
        if self.field_degree < 1:
            raise ValueError("field degree must be positive")
        s = self.size
        if s < 1:
            raise MissingAValues("a linear form needs at least one base or replay A-value")
        if self.exponents is not None:
            if len(self.exponents) != s:
                raise ValueError("one exponent per base expected")
            if max(abs(b) for b in self.exponents) > upper(interval(self.exponents_bound)):
                raise ValueError("exponent bound B is smaller than max |b_j|")

    @property
    def size(self) -> int:
        if self.A_values is not None:
            return len(self.A_values)
        return len(self.gammas)


def matveev_prefactor(s: int, degree: int, precision: int = DEFAULT_PRECISION):
    """``1.4 * 30**(s+3) * s**4.5 * D**2 * (1 + log D)``."""
    with working_precision(precision):
        s_pow = iv.mpf(s) ** 4 * iv.sqrt(iv.mpf(s))
        return iv.mpf("1.4") * iv.mpf(30) ** (s + 3) * s_pow * iv.mpf(degree) ** 2 * (1 + iv.log(iv.mpf(degree)))


def a_values(instance: LinearFormInstance, precision: int = DEFAULT_PRECISION) -> list:
    if instance.A_values is not None:
        return [interval(a) for a in instance.A_values]
    if not instance.gammas:
        raise MissingAValues("no bases and no replay A-values")
    return [matveev_A(g, instance.field_degree, precision) for g in instance.gammas]


def matveev_leading_constant(instance: LinearFormInstance, precision: int = DEFAULT_PRECISION):
    """Everything in Matveev's exponent except the ``(1 + log B)`` factor."""
    with working_precision(precision):
        out = matveev_prefactor(instance.size, instance.field_degree, precision)
        for a in a_values(instance, precision):
            out = out * a
        return out


def matveev_lower_bound(instance: LinearFormInstance, precision: int = DEFAULT_PRECISION):
    """``L`` with ``log |Lambda| >= L`` whenever ``Lambda != 0``.

    Non-vanishing must be certified by the caller.  The result interval's
    lower endpoint is the safe (most negative) value.
    """
    with working_precision(precision):
        lead = matveev_leading_constant(instance, precision)
        b = interval(instance.exponents_bound)
        if not b.a >= 1:
            raise ValueError("exponent bound B must be at least 1")
        return -(lead * (1 + iv.log(b)))


def coefficient_height_polynomial(decomp) -> IntegerPolynomial:
    """Integer polynomial whose roots are the ``1 / f_i`` of a Binet decomposition.

    ``N(X) = prod (P(alpha_i) X - f'(alpha_i))`` is symmetric in the roots of
    the monic characteristic polynomial, so its coefficients are rational
    integers; they are recovered by rounding certified enclosures.
    """
    poly = decomp.polynomial
    deriv = poly.derivative()
    bits = decomp.precision
    from .recurrence import isolate_roots

    while bits <= MAX_PRECISION:
        with working_precision(bits):
            roots = isolate_roots(poly, bits)
            acc = [iv.mpc(1, 0)]
            for r in roots:
                a = r.enclosure
                lin = (-deriv(a), decomp.numerator(a))
                nxt = [iv.mpc(0, 0)] * (len(acc) + 1)
                for i, c in enumerate(acc):
                    nxt[i] = nxt[i] + c * lin[0]
                    nxt[i + 1] = nxt[i + 1] + c * lin[1]
                acc = nxt
            coeffs = []
            for c in acc:
                n = int(mp.nint(c.real.mid))
                if not (c.real.a > n - 0.5 and c.real.b < n + 0.5 and iabs(c.imag).b < 0.5):
                    break
                coeffs.append(n)
            else:
                while len(coeffs) > 1 and coeffs[-1] == 0:
                    coeffs.pop()
                return IntegerPolynomial(tuple(coeffs))
        bits *= 2
    raise PrecisionExhausted("could not round the coefficient polynomial to integers")


def dominant_coefficient_ref(decomp) -> AlgebraicNumberRef:
    """Reference to ``1 / f_1`` (same height as ``f_1``) from its minimal polynomial."""
    n = coefficient_height_polynomial(decomp)
    if n.degree < 1:
        raise DivisionByZeroSymbol("dominant Binet coefficient is zero")
    parts = squarefree_decomposition(n)
    m = parts[0][0]
    for g, _ in parts[1:]:
        m = m * g
    m = m.primitive()
    if m.leading < 0:
        m = IntegerPolynomial(tuple(-c for c in m.coefficients))
    target = decomp.coefficients[decomp.dominant_index]
    with working_precision(decomp.precision):
        inv = 1 / target
    return AlgebraicNumberRef.from_polynomial(
        m, select=lambda r: _meets(r, inv), label="1/f_1", precision=decomp.precision, check_irreducible=False
    )


def _meets(root, box) -> bool:
    """Whether a root disk and a complex box may intersect."""
    d = abs(box - iv.mpc(mp.re(root.center), mp.im(root.center)))
    return d.a <= root.radius
