"""Integer linear recurrences, certified roots and Binet decompositions.

A recurrence ``U_n = a_1 U_{n-1} + ... + a_r U_{n-r}`` is described by a
:class:`RecurrenceSpec`.  Its characteristic roots are isolated in disjoint
complex disks (Weierstrass/Gerschgorin inclusion), and the Binet coefficients
``f_i`` with ``U_n = sum f_i alpha_i**n`` are enclosed in complex intervals.
Exactly vanishing coefficients are detected symbolically, never by a
tolerance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from mpmath import iv, mp

from .errors import PrecisionExhausted, RepeatedRoots
from .intervals import (
    DEFAULT_PRECISION,
    MAX_PRECISION,
    cinterval,
    contains_zero,
    iabs,
    ilog,
    imin,
    interval,
    lower,
    upper,
    working_precision,
)
from .polynomials import (
    SMALL_PRIMES,
    IntegerPolynomial,
    exact_divide,
    is_irreducible,
    polynomial_gcd,
    small_factor,
    squarefree_decomposition,
)

DELTA_CAP = 1 - mp.mpf(2) ** -10


@dataclass(frozen=True)
class RecurrenceSpec:
    coefficients: tuple[int, ...]
    initials: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(c) for c in self.coefficients)
        u = tuple(int(c) for c in self.initials)
        if not a:
            raise ValueError("order must be at least 1")
        if len(u) != len(a):
            raise ValueError(f"need {len(a)} initial values, got {len(u)}")
        if a[-1] == 0:
            raise ValueError("last recurrence coefficient a_r must be nonzero")
        if not any(u):
            raise ValueError("initial values must not all vanish")
        object.__setattr__(self, "coefficients", a)
        object.__setattr__(self, "initials", u)

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "coefficients": [str(c) for c in self.coefficients],
            "initials": [str(c) for c in self.initials],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RecurrenceSpec":
        for key in ("order", "coefficients", "initials"):
            if key not in data:
                raise ValueError(f"recurrence spec is missing field '{key}'")
        try:
            coeffs = tuple(int(str(c)) for c in data["coefficients"])
        except (TypeError, ValueError) as exc:
            raise ValueError(f"field 'coefficients' must hold decimal integers: {exc}") from None
        try:
            initials = tuple(int(str(c)) for c in data["initials"])
        except (TypeError, ValueError) as exc:
            raise ValueError(f"field 'initials' must hold decimal integers: {exc}") from None
        if int(data["order"]) != len(coeffs):
            raise ValueError(f"field 'order' is {data['order']} but {len(coeffs)} coefficients were given")
        return cls(coeffs, initials)


FIBONACCI = RecurrenceSpec((1, 1), (0, 1))
COUNTEREXAMPLE = RecurrenceSpec((3, -3, 2), (0, 1, 1))


def load_spec(path) -> RecurrenceSpec:
    return RecurrenceSpec.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def dump_spec(spec: RecurrenceSpec, path) -> None:
    Path(path).write_text(json.dumps(spec.to_json(), indent=2) + "\n", encoding="utf-8")


def eval_terms(spec: RecurrenceSpec, start: int, stop: int) -> list[int]:
    """Exact terms ``U_start ... U_stop`` (inclusive)."""
    if not 0 <= start <= stop:
        raise ValueError("need 0 <= start <= stop")
    r = spec.order
    window = list(spec.initials)
    out = window[start : stop + 1]
    rev = spec.coefficients
    for n in range(r, stop + 1):
        nxt = sum(c * window[-1 - i] for i, c in enumerate(rev))
        window.append(nxt)
        window.pop(0)
        if n >= start:
            out.append(nxt)
    return out


def char_poly(spec: RecurrenceSpec) -> IntegerPolynomial:
    """``x^r - a_1 x^{r-1} - ... - a_r``."""
    return IntegerPolynomial(tuple(-c for c in reversed(spec.coefficients)) + (1,))


# -- root isolation -----------------------------------------------------------

@dataclass(frozen=True)
class RootEnclosure:
    """A disk ``|z - center| <= radius`` holding exactly one distinct root."""

    center: object
    radius: object
    multiplicity: int
    is_real: bool

    @property
    def enclosure(self):
        c, r = self.center, self.radius
        re = iv.mpf([mp.re(c), mp.re(c)]) + iv.mpf([-r, r])
        if self.is_real:
            return iv.mpc(re, 0)
        return iv.mpc(re, iv.mpf([mp.im(c), mp.im(c)]) + iv.mpf([-r, r]))

    @property
    def modulus(self):
        r = iv.mpf([self.radius, self.radius])
        m = abs(iv.mpc(mp.re(self.center), mp.im(self.center)))
        lo = m - r
        return iv.mpf([max(lower(lo), 0), upper(m + r)])

    def contains(self, z) -> bool:
        """Whether the disk certainly contains the point/box ``z``."""
        d = abs(cinterval(z) - iv.mpc(mp.re(self.center), mp.im(self.center)))
        return d.b <= self.radius

    def disjoint_from(self, other: "RootEnclosure") -> bool:
        return _disks_disjoint(self.center, self.radius, other.center, other.radius)


def _disks_disjoint(c1, r1, c2, r2) -> bool:
    d = abs(iv.mpc(mp.re(c1), mp.im(c1)) - iv.mpc(mp.re(c2), mp.im(c2)))
    return d.a > iv.mpf(r1) + iv.mpf(r2)


def _approximate_roots(g: IntegerPolynomial, bits: int):
    if g.degree == 1:
        return [mp.mpc(-mp.mpf(g.coefficients[0]) / g.coefficients[1], 0)]
    try:
        roots = mp.polyroots(g.descending(), maxsteps=200 + 20 * g.degree, extraprec=bits)
    except mp.NoConvergence:
        return None
    return [mp.mpc(z) for z in roots]


def _inclusion_radii(g: IntegerPolynomial, zs, bits: int):
    """Radii ``n |W_i|`` of the Weierstrass inclusion disks, or None."""
    n = g.degree
    boxes = [iv.mpc(mp.re(z), mp.im(z)) for z in zs]
    lead = iv.mpf(g.leading)
    radii = []
    for i, z in enumerate(boxes):
        den = iv.mpc(lead, 0)
        for j, w in enumerate(boxes):
            if j != i:
                den = den * (z - w)
        if abs(den).a <= 0:
            return None
        radii.append(upper(n * abs(g(z) / den)))
    return radii


def _try_isolate(parts, bits):
    disks = []
    with working_precision(bits):
        for g, mult in parts:
            zs = _approximate_roots(g, bits)
            if zs is None or len(zs) != g.degree:
                return None
            radii = _inclusion_radii(g, zs, bits)
            if radii is None:
                return None
            disks.extend((z, r, mult) for z, r in zip(zs, radii))
        for i in range(len(disks)):
            for j in range(i + 1, len(disks)):
                if not _disks_disjoint(disks[i][0], disks[i][1], disks[j][0], disks[j][1]):
                    return None
        out = []
        for i, (z, r, mult) in enumerate(disks):
            touches_axis = iabs(iv.mpf([mp.im(z), mp.im(z)])).a <= r
            if not touches_axis:
                out.append(RootEnclosure(z, r, mult, False))
                continue
            mirror = mp.conj(z)
            if not all(_disks_disjoint(mirror, r, w, s) for j, (w, s, _) in enumerate(disks) if j != i):
                return None
            # conjugation maps the disk's unique root into the same disk, so it is real
            out.append(RootEnclosure(mp.mpc(mp.re(z), 0), r, mult, True))
    return out


def isolate_roots(
    poly: IntegerPolynomial, precision: int = DEFAULT_PRECISION, max_precision: int = MAX_PRECISION
) -> list[RootEnclosure]:
    """Certified, pairwise disjoint disks around every distinct complex root.

    Multiplicities come from the exact squarefree decomposition.  The working
    precision doubles from ``precision`` until all disks separate.
    """
    if poly.degree < 1:
        raise ValueError("cannot isolate roots of a constant polynomial")
    parts = squarefree_decomposition(poly)
    bits = precision
    while bits <= max_precision:
        roots = _try_isolate(parts, bits)
        if roots is not None:
            return sorted(roots, key=lambda e: (-abs(e.center), -mp.re(e.center), -mp.im(e.center)))
        bits *= 2
    raise PrecisionExhausted(f"could not separate the roots of {poly} at {max_precision} bits")


# -- Binet decomposition --------------------------------------------------------

@dataclass(frozen=True)
class BinetDecomposition:
    spec: RecurrenceSpec
    roots: tuple[RootEnclosure, ...]
    coefficients: tuple
    dominant_index: int | None
    dominance_gap: object | None
    degenerate: bool
    numerator: IntegerPolynomial
    precision: int
    zero_coefficients: tuple[int, ...] = field(default=())

    @property
    def polynomial(self) -> IntegerPolynomial:
        return char_poly(self.spec)

    @property
    def dominant_root(self) -> RootEnclosure | None:
        return None if self.dominant_index is None else self.roots[self.dominant_index]

    @property
    def dominant_coefficient(self):
        return None if self.dominant_index is None else self.coefficients[self.dominant_index]

    def term(self, n: int):
        """Interval enclosure of ``sum f_i alpha_i**n``."""
        with working_precision(self.precision + n.bit_length() + 16):
            acc = iv.mpc(0, 0)
            for i, (root, coeff) in enumerate(zip(self.roots, self.coefficients)):
                if i in self.zero_coefficients:
                    continue
                acc = acc + coeff * _power(root.enclosure, n)
            return acc


def _power(z, n: int):
    result = iv.mpc(1, 0)
    base = z
    while n:
        if n & 1:
            result = result * base
        base = base * base
        n >>= 1
    return result


def binet_numerator(spec: RecurrenceSpec) -> IntegerPolynomial:
    """Integer polynomial ``P`` with ``f_i = P(alpha_i) / f'(alpha_i)``.

    Comes from inverting the Vandermonde system through the quotient
    ``f(x) / (x - alpha)``, whose coefficients are polynomials in ``alpha``.
    """
    c = char_poly(spec).coefficients
    r = spec.order
    out = [0] * r
    for n, u in enumerate(spec.initials):
        if not u:
            continue
        for k in range(n + 1, r + 1):
            out[k - n - 1] += u * c[k]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return IntegerPolynomial(tuple(out))


def _vanishing_indices(numerator, poly, roots, precision) -> set[int]:
    """Indices of roots at which ``numerator`` vanishes, decided exactly."""
    if numerator.is_zero:
        return set(range(len(roots)))
    g = polynomial_gcd(numerator, poly)
    if g.degree < 1:
        return set()
    bits = precision
    while bits <= MAX_PRECISION:
        hits = set()
        ok = True
        with working_precision(bits):
            for z in isolate_roots(g, bits):
                owners = [i for i, e in enumerate(roots) if not e.disjoint_from(z)]
                if len(owners) != 1:
                    ok = False
                    break
                hits.add(owners[0])
        if ok:
            return hits
        bits *= 2
    raise PrecisionExhausted("could not attribute the common roots of P and f")


def binet_coefficients(
    spec: RecurrenceSpec,
    roots: Sequence[RootEnclosure] | None = None,
    precision: int = DEFAULT_PRECISION,
    max_precision: int = MAX_PRECISION,
) -> BinetDecomposition:
    poly = char_poly(spec)
    bits = precision
    if roots is None:
        roots = isolate_roots(poly, bits, max_precision)
    if any(r.multiplicity > 1 for r in roots):
        raise RepeatedRoots(f"{poly} has repeated roots; only simple-root Binet forms are supported")
    numerator = binet_numerator(spec)
    deriv = poly.derivative()
    while True:
        with working_precision(bits):
            ordered = sorted(roots, key=lambda e: -upper(e.modulus))
            zeros = _vanishing_indices(numerator, poly, ordered, bits)
            coeffs = []
            unresolved = False
            for i, root in enumerate(ordered):
                if i in zeros:
                    coeffs.append(iv.mpc(0, 0))
                    continue
                a = root.enclosure
                d = deriv(a)
                if contains_zero(d):
                    unresolved = True
                    break
                f = numerator(a) / d
                if contains_zero(f):
                    unresolved = True
                    break
                coeffs.append(f)
            if not unresolved:
                dom, gap = _dominance(ordered)
                degenerate = dom is not None and dom in zeros
                return BinetDecomposition(
                    spec, tuple(ordered), tuple(coeffs), dom, gap, degenerate, numerator, bits, tuple(sorted(zeros))
                )
        bits *= 2
        if bits > max_precision:
            raise PrecisionExhausted("Binet coefficient enclosures still contain 0 at the precision cap")
        roots = isolate_roots(poly, bits, max_precision)


def _dominance(ordered):
    if not ordered:
        return None, None
    top = ordered[0]
    if top.multiplicity != 1:
        return None, None
    if len(ordered) == 1:
        return 0, None
    second = max(upper(e.modulus) for e in ordered[1:])
    if not top.modulus.a > second:
        return None, None
    if not top.modulus.a > 1:
        return 0, None
    m2 = iv.mpf([max(lower(e.modulus) for e in ordered[1:]), second])
    if m2.a <= 0:
        return 0, None
    gap = 1 - iv.log(m2) / iv.log(top.modulus)
    return 0, gap


@dataclass(frozen=True)
class DominanceReport:
    has_dominant: bool
    dominant_real_gt1: bool
    delta_raw: object | None
    delta: object | None


def classify_dominance(decomp) -> DominanceReport:
    """Dominant-root flags and the decay exponent ``delta``.

    Accepts a :class:`BinetDecomposition` or a bare list of root enclosures
    (needed when repeated roots rule out a decomposition).
    """
    roots = decomp.roots if isinstance(decomp, BinetDecomposition) else sorted(decomp, key=lambda e: -upper(e.modulus))
    dom, gap = _dominance(list(roots))
    if dom is None:
        return DominanceReport(False, False, None, None)
    top = roots[dom]
    real_gt1 = top.is_real and top.enclosure.real.a > 1
    delta = None if gap is None else imin(gap, DELTA_CAP)
    return DominanceReport(True, real_gt1, gap, delta)


def growth_constant(decomp: BinetDecomposition, check_terms: int = 200):
    """``c_1 = sum |f_i|`` so that ``|U_n| <= c_1 |alpha_1|**n``.

    The guarantee is re-checked against the exact terms for ``n <= check_terms``.
    """
    if decomp.dominant_index is None:
        raise ValueError("growth constant needs a dominant root")
    with working_precision(decomp.precision):
        c1 = sum((iabs(f) for f in decomp.coefficients), iv.mpf(0))
        top = upper(decomp.dominant_root.modulus)
        bound = iv.mpf([upper(c1), upper(c1)])
        base = iv.mpf([top, top])
        for n, u in enumerate(eval_terms(decomp.spec, 0, check_terms)):
            if n >= 1 and not abs(u) <= upper(bound * base**n):
                raise AssertionError(f"growth bound violated at n={n}")
        return c1


@dataclass(frozen=True)
class HypothesisReport:
    order_ge_2: bool
    irreducible: bool | None
    dominant_real_gt1: bool
    f1_nonzero: bool | None
    factor: IntegerPolynomial | None = None

    @property
    def ok(self) -> bool:
        return self.order_ge_2 and self.irreducible is True and self.dominant_real_gt1 and self.f1_nonzero is True

    def to_json(self) -> dict:
        return {
            "order_ge_2": self.order_ge_2,
            "irreducible": self.irreducible,
            "dominant_real_gt1": self.dominant_real_gt1,
            "f1_nonzero": self.f1_nonzero,
            "factor": None if self.factor is None else str(self.factor),
        }


def check_hypotheses(spec: RecurrenceSpec, primes: Sequence[int] = SMALL_PRIMES) -> HypothesisReport:
    poly = char_poly(spec)
    irreducible = is_irreducible(poly, primes)
    factor = None
    if irreducible is False and poly.degree <= 4:
        factor = small_factor(poly)
    roots = isolate_roots(poly)
    dominance = classify_dominance(roots)
    try:
        decomp = binet_coefficients(spec, roots)
    except RepeatedRoots:
        f1_nonzero = None
    else:
        f1_nonzero = None if decomp.dominant_index is None else not decomp.degenerate
    return HypothesisReport(spec.order >= 2, irreducible, dominance.dominant_real_gt1, f1_nonzero, factor)


@lru_cache(maxsize=64)
def analyze(spec: RecurrenceSpec, precision: int = DEFAULT_PRECISION) -> BinetDecomposition:
    """Cached decomposition used by the bound pipeline."""
    return binet_coefficients(spec, precision=precision)


def factor_witness(poly: IntegerPolynomial) -> tuple[IntegerPolynomial, IntegerPolynomial] | None:
    """``(g, poly / g)`` for a proper factor found by the exact small-degree search."""
    g = small_factor(poly)
    if g is None:
        return None
    return g, exact_divide(poly, g)


def real_part(z):
    """Real interval of a certified-real enclosure."""
    return interval(z.real)


def log_modulus(root: RootEnclosure):
    return ilog(root.modulus)
