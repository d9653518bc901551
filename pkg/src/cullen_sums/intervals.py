"""Thin helpers over :mod:`mpmath.iv` outward-rounded interval arithmetic.

Real intervals are ``iv.mpf`` objects and complex intervals are ``iv.mpc``
rectangles.  The working precision of both the ``iv`` and ``mp`` contexts is
global state in mpmath, so every computation that cares wraps itself in
:func:`working_precision`.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from fractions import Fraction

from mpmath import iv, mp

DEFAULT_PRECISION = int(os.environ.get("CULLEN_SUMS_PRECISION", "256"))
MAX_PRECISION = 8192

Interval = type(iv.mpf(0))
ComplexInterval = type(iv.mpc(0))


@contextmanager
def working_precision(bits: int):
    """Set the binary precision of both mpmath contexts for a block."""
    old = (iv.prec, mp.prec)
    iv.prec = mp.prec = max(int(bits), 53)
    try:
        yield
    finally:
        iv.prec, mp.prec = old


def interval(x) -> Interval:
    """Convert ints, Fractions, mpf values, ``(lo, hi)`` pairs or intervals."""
    if isinstance(x, Interval):
        return x
    if isinstance(x, ComplexInterval):
        raise TypeError("expected a real interval")
    if isinstance(x, Fraction):
        return iv.mpf(x.numerator) / x.denominator
    if isinstance(x, tuple):
        return iv.mpf([interval(x[0]).a, interval(x[1]).b])
    if isinstance(x, float):
        return iv.mpf(x)
    return iv.mpf(x)


def cinterval(x) -> ComplexInterval:
    if isinstance(x, ComplexInterval):
        return x
    if isinstance(x, complex):
        return iv.mpc(x.real, x.imag)
    if hasattr(x, "imag") and not isinstance(x, (int, Fraction, Interval)):
        return iv.mpc(x.real, x.imag)
    return iv.mpc(interval(x), 0)


def lower(x):
    """Exact lower endpoint as an ``mp.mpf`` (no rounding)."""
    return mp.make_mpf(interval(x)._mpi_[0])


def upper(x):
    """Exact upper endpoint as an ``mp.mpf`` (no rounding)."""
    return mp.make_mpf(interval(x)._mpi_[1])


def hull(lo, hi) -> Interval:
    return iv.mpf([interval(lo).a, interval(hi).b])


def contains_zero(x) -> bool:
    if isinstance(x, ComplexInterval):
        return contains_zero(x.real) and contains_zero(x.imag)
    x = interval(x)
    return x.a <= 0 <= x.b


def is_positive(x) -> bool:
    return interval(x).a > 0


def imax(*xs) -> Interval:
    """Interval enclosing ``max`` of the enclosed reals."""
    xs = [interval(x) for x in xs]
    lo = max(lower(x) for x in xs)
    hi = max(upper(x) for x in xs)
    return iv.mpf([lo, hi])


def imin(*xs) -> Interval:
    xs = [interval(x) for x in xs]
    lo = min(lower(x) for x in xs)
    hi = min(upper(x) for x in xs)
    return iv.mpf([lo, hi])


def iabs(x) -> Interval:
    if isinstance(x, ComplexInterval):
        return abs(x)
    x = interval(x)
    if x.a >= 0:
        return x
    if x.b <= 0:
        return -x
    return iv.mpf([0, max(upper(-x), upper(x))])


def ilog(x) -> Interval:
    x = interval(x)
    if not x.a > 0:
        raise ValueError("logarithm of an interval touching (-inf, 0]")
    return iv.log(x)


def width(x):
    x = interval(x)
    return upper(x) - lower(x)


def float_bounds(x) -> tuple[float, float]:
    """Outward float rounding of an interval, suitable for serialisation."""
    x = interval(x)
    lo, hi = lower(x), upper(x)
    flo, fhi = float(lo), float(hi)
    if mp.mpf(flo) > lo:
        flo = math.nextafter(flo, -math.inf)
    if mp.mpf(fhi) < hi:
        fhi = math.nextafter(fhi, math.inf)
    return flo, fhi


def midpoint(x):
    x = interval(x)
    return (lower(x) + upper(x)) / 2


def floor_upper(x) -> int:
    """``floor`` of the upper endpoint, exact."""
    return int(mp.floor(upper(x)))


def ceil_upper(x) -> int:
    return int(mp.ceil(upper(x)))


def short(x, digits: int = 6) -> str:
    """Compact human-readable rendering ``mid`` (used in tables and logs)."""
    if isinstance(x, ComplexInterval):
        return f"{short(x.real, digits)}{'+' if midpoint(x.imag) >= 0 else '-'}{short(abs(midpoint(x.imag)), digits)}i"
    if not isinstance(x, Interval):
        return mp.nstr(x, digits)
    return mp.nstr(midpoint(x), digits)


def to_fraction(x) -> Fraction:
    """Exact rational value of an ``mpf`` endpoint."""
    raw = x._mpf_ if hasattr(x, "_mpf_") else mp.mpf(x)._mpf_
    if raw[1] == 0 and raw[2] != 0:
        raise ValueError("non-finite endpoint")
    sign, man, exp, _ = raw
    value = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -value if sign else value


def exact_bounds(x) -> tuple[Fraction, Fraction]:
    x = interval(x)
    return to_fraction(lower(x)), to_fraction(upper(x))


def contains_rational(x, q) -> bool:
    """Exact membership test, immune to int-to-float rounding."""
    lo, hi = exact_bounds(x)
    return lo <= Fraction(q) <= hi
