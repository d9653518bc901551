"""Exact integer/rational polynomial arithmetic.

Coefficient lists are stored in ascending order: ``coefficients[i]`` is the
coefficient of ``x**i``.  Rational polynomials are plain tuples of
:class:`~fractions.Fraction`; only the integer type is part of the public
surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

SMALL_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


@dataclass(frozen=True)
class IntegerPolynomial:
    coefficients: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("polynomial needs at least one coefficient")
        if coeffs[-1] == 0 and len(coeffs) > 1:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_roots(cls, roots: Sequence[int]) -> "IntegerPolynomial":
        p = (1,)
        for r in roots:
            p = _mul(p, (-r, 1))
        return cls(p)

    @property
    def degree(self) -> int:
        return -1 if self.is_zero else len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1]

    @property
    def is_zero(self) -> bool:
        return self.coefficients == (0,)

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        return IntegerPolynomial(_mul(self.coefficients, other.coefficients))

    def __add__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        return IntegerPolynomial(_trim(_add(self.coefficients, other.coefficients)))

    def __sub__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        return self + IntegerPolynomial(tuple(-c for c in other.coefficients))

    def derivative(self) -> "IntegerPolynomial":
        if self.degree < 1:
            return IntegerPolynomial((0,))
        return IntegerPolynomial(tuple(i * c for i, c in enumerate(self.coefficients) if i))

    def content(self) -> int:
        return reduce(math.gcd, self.coefficients, 0)

    def primitive(self) -> "IntegerPolynomial":
        """Content-free version with positive leading coefficient."""
        g = self.content() or 1
        if self.leading < 0:
            g = -g
        return IntegerPolynomial(tuple(c // g for c in self.coefficients))

    def norm1(self) -> int:
        return sum(abs(c) for c in self.coefficients)

    def descending(self) -> list[int]:
        return list(reversed(self.coefficients))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coefficients[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = {0: f"{mag}", 1: "x" if mag == 1 else f"{mag}x"}.get(i, f"x^{i}" if mag == 1 else f"{mag}x^{i}")
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


def _add(a, b):
    n = max(len(a), len(b))
    return tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def _mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


# -- rational polynomial helpers ---------------------------------------------

def _q(p) -> tuple[Fraction, ...]:
    coeffs = p.coefficients if isinstance(p, IntegerPolynomial) else p
    return _trim(tuple(Fraction(c) for c in coeffs))


def _is_zero_q(p) -> bool:
    return len(p) == 1 and p[0] == 0


def qdivmod(a, b):
    """Division with remainder over Q."""
    a, b = list(_q(a)), _q(b)
    if _is_zero_q(b):
        raise ZeroDivisionError("polynomial division by zero")
    db, lb = len(b) - 1, b[-1]
    if len(a) - 1 < db:
        return (Fraction(0),), _trim(a)
    quot = [Fraction(0)] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / lb
        quot[i - db] = c
        if c:
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    rem = _trim(a[:db] or [Fraction(0)])
    return _trim(quot), rem


def qgcd(a, b):
    """Monic gcd over Q."""
    a, b = _q(a), _q(b)
    while not _is_zero_q(b):
        a, b = b, qdivmod(a, b)[1]
    if _is_zero_q(a):
        return a
    lead = a[-1]
    return tuple(c / lead for c in a)


def to_integer(p) -> IntegerPolynomial:
    """Scale a rational polynomial to a primitive integer one."""
    p = _q(p)
    den = reduce(lambda x, y: x * y // math.gcd(x, y), (c.denominator for c in p), 1)
    return IntegerPolynomial(tuple(int(c * den) for c in p)).primitive()


def exact_divide(a: IntegerPolynomial, b: IntegerPolynomial) -> IntegerPolynomial:
    quot, rem = qdivmod(a, b)
    if not _is_zero_q(rem) or any(c.denominator != 1 for c in quot):
        raise ValueError(f"{b} does not divide {a} over Z")
    return IntegerPolynomial(tuple(int(c) for c in quot))


def polynomial_gcd(a: IntegerPolynomial, b: IntegerPolynomial) -> IntegerPolynomial:
    """Primitive gcd (positive leading coefficient); ``1`` when coprime."""
    g = qgcd(a, b)
    if _is_zero_q(g):
        return IntegerPolynomial((0,))
    return to_integer(g)


def squarefree_decomposition(p: IntegerPolynomial) -> list[tuple[IntegerPolynomial, int]]:
    """Yun's algorithm: ``p = c * prod(s_m ** m)`` with each ``s_m`` squarefree.

    Only factors of positive degree are returned, as primitive integer
    polynomials paired with their multiplicity.
    """
    if p.degree < 1:
        return []
    f = _q(p)
    df = _q(p.derivative())
    a = qgcd(f, df)
    b = qdivmod(f, a)[0]
    c = qdivmod(df, a)[0]
    d = _sub(c, _deriv(b))
    out = []
    m = 1
    while len(b) > 1:
        g = qgcd(b, d)
        if len(g) > 1:
            out.append((to_integer(g), m))
        b = qdivmod(b, g)[0]
        c = qdivmod(d, g)[0]
        d = _sub(c, _deriv(b))
        m += 1
    return out


def _sub(a, b):
    return _trim(_add(a, tuple(-x for x in b)))


def _deriv(p):
    if len(p) == 1:
        return (Fraction(0),)
    return tuple(i * c for i, c in enumerate(p) if i)


# -- irreducibility ------------------------------------------------------------

def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def integer_roots(p: IntegerPolynomial) -> list[int]:
    """All integer roots of a monic polynomial (rational-root test)."""
    if p.coefficients[0] == 0:
        rest = IntegerPolynomial(p.coefficients[1:])
        return sorted(set([0] + integer_roots(rest))) if rest.degree >= 1 else [0]
    roots = []
    for d in _divisors(p.coefficients[0]):
        for r in (d, -d):
            if p(r) == 0:
                roots.append(r)
    return sorted(roots)


def rational_roots(p: IntegerPolynomial) -> list[Fraction]:
    if p.coefficients[0] == 0:
        rest = IntegerPolynomial(p.coefficients[1:]) if p.degree > 0 else p
        return sorted(set([Fraction(0)] + (rational_roots(rest) if rest.degree >= 1 else [])))
    roots = set()
    for num in _divisors(p.coefficients[0]):
        for den in _divisors(p.leading):
            for r in (Fraction(num, den), Fraction(-num, den)):
                if p(r) == 0:
                    roots.add(r)
    return sorted(roots)


def _has_quadratic_factor(p: IntegerPolynomial) -> IntegerPolynomial | None:
    """Monic quartic split into two monic integer quadratics, if any."""
    e, s, q, pp, _ = p.coefficients
    for b in _divisors(e):
        for bb in (b, -b):
            d = e // bb
            prod = q - bb - d
            disc = pp * pp - 4 * prod
            if disc < 0:
                continue
            root = math.isqrt(disc)
            if root * root != disc or (pp + root) % 2:
                continue
            a = (pp + root) // 2
            c = pp - a
            if a * d + bb * c == s:
                return IntegerPolynomial((bb, a, 1))
    return None


def small_factor(p: IntegerPolynomial) -> IntegerPolynomial | None:
    """A proper monic factor of a monic polynomial of degree <= 4, or None."""
    if not p.is_monic or p.degree > 4:
        raise ValueError("exact factor search needs a monic polynomial of degree <= 4")
    roots = integer_roots(p)
    if roots and p.degree > 1:
        return IntegerPolynomial((-roots[0], 1))
    if p.degree == 4:
        return _has_quadratic_factor(p)
    return None


def is_irreducible(p: IntegerPolynomial, primes: Sequence[int] = SMALL_PRIMES) -> bool | None:
    """Irreducibility over Q.

    Decided exactly for monic polynomials of degree <= 4.  Otherwise the
    polynomial is tested modulo each prime that keeps it squarefree and of full
    degree; irreducible modulo some such prime proves irreducibility, and
    ``None`` is returned when no prime settles it.
    """
    if p.degree < 1:
        return False
    if p.degree == 1:
        return True
    p = p.primitive()
    if rational_roots(p):
        return False
    if p.is_monic and p.degree <= 4:
        return small_factor(p) is None
    for prime in primes:
        fp = _modp(p.coefficients, prime)
        if len(fp) - 1 != p.degree:
            continue
        if len(_gcd_modp(fp, _deriv_modp(fp, prime), prime)) > 1:
            continue
        if _rabin_irreducible(fp, prime):
            return True
    return None


# -- arithmetic in GF(p)[x] ---------------------------------------------------

def _modp(coeffs, p):
    out = [c % p for c in coeffs]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _deriv_modp(f, p):
    return _modp([i * c for i, c in enumerate(f)][1:] or [0], p)


def _divmod_modp(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [0], _modp(a, p)
    quot = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        quot[i - db] = c
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return _modp(quot, p), _modp(a[:db] or [0], p)


def _gcd_modp(a, b, p):
    while b != [0]:
        a, b = b, _divmod_modp(a, b, p)[1]
    return a


def _mulmod_modp(a, b, f, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _divmod_modp(prod, f, p)[1]


def _powx_modp(e, f, p):
    result, base = [1], _divmod_modp([0, 1], f, p)[1]
    while e:
        if e & 1:
            result = _mulmod_modp(result, base, f, p)
        base = _mulmod_modp(base, base, f, p)
        e >>= 1
    return result


def _rabin_irreducible(f, p) -> bool:
    n = len(f) - 1
    x = [0, 1]
    for i in range(1, n // 2 + 1):
        h = _powx_modp(p ** i, f, p)
        diff = _modp([(h[j] if j < len(h) else 0) - (x[j] if j < len(x) else 0) for j in range(max(len(h), 2))], p)
        if len(_gcd_modp(f, diff, p)) > 1:
            return False
    return True
