"""Exhaustive desk-scale searches and exact certificates.

All comparisons are exact big-integer arithmetic; nothing here is numeric.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .baker import ProblemInstance
from .polynomials import IntegerPolynomial, exact_divide, polynomial_gcd
from .recurrence import (
    COUNTEREXAMPLE,
    FIBONACCI,
    RecurrenceSpec,
    binet_numerator,
    char_poly,
    check_hypotheses,
    eval_terms,
)


@dataclass(frozen=True, order=True)
class SolutionTuple:
    """``indices`` (descending), ``ell`` and ``x`` of a solution."""

    indices: tuple
    ell: int
    x: int = 2

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(n) for n in self.indices))
        if not self.indices:
            raise ValueError("a solution needs at least one index (k >= 1)")
        if any(a < b for a, b in zip(self.indices, self.indices[1:])) or self.indices[-1] < 0:
            raise ValueError(f"indices must be non-increasing and non-negative: {self.indices}")
        if self.ell < 0 or self.x < 2:
            raise ValueError("need ell >= 0 and x >= 2")

    @property
    def key(self) -> tuple:
        return (self.ell, self.indices)

    def as_list(self) -> list[int]:
        return [*self.indices, self.ell]

    def to_json(self) -> list[str]:
        return [str(v) for v in self.as_list()]


def canonical(solutions) -> list[SolutionTuple]:
    return sorted(set(solutions), key=lambda s: s.key)


def certify_solution(instance: ProblemInstance, sol: SolutionTuple, allow_equal: bool = False) -> bool:
    """Exact check of ``sum U_{n_i} = ell x**ell + Q(x)`` for the given tuple."""
    if len(sol.indices) != instance.k or sol.x != instance.x:
        return False
    if not allow_equal and any(a == b for a, b in zip(sol.indices, sol.indices[1:])):
        return False
    terms = eval_terms(instance.spec, 0, max(sol.indices))
    lhs = sum(terms[n] for n in sol.indices)
    rhs = sol.ell * instance.x**sol.ell + instance.shift_value
    return lhs == rhs


# -- Fibonacci / Cullen ----------------------------------------------------------

@dataclass(frozen=True)
class ParityCertificate:
    statement: str
    brute_force_n1_max: int
    brute_force_ell_max: int
    hits: int

    @property
    def ok(self) -> bool:
        return self.hits == 0


@lru_cache(maxsize=4)
def parity_excludes_equal_indices(n1_max: int = 60, ell_max: int = 60) -> ParityCertificate:
    """``2 F_n`` is even and ``ell 2**ell + 1`` is odd, so ``n_1 = n_2`` never works."""
    fib = eval_terms(FIBONACCI, 0, n1_max)
    targets = {ell * 2**ell + 1 for ell in range(ell_max + 1)}
    hits = sum(1 for f in fib if 2 * f in targets)
    return ParityCertificate(
        "2 F_n is even while ell 2^ell + 1 is odd (ell 2^ell is even for ell >= 1, and 1 for ell = 0)",
        n1_max,
        ell_max,
        hits,
    )


def _fibonacci_range(args):
    ell_lo, ell_hi, n1_max = args
    fib = eval_terms(FIBONACCI, 0, n1_max)
    order = sorted(range(len(fib)), key=lambda i: (fib[i], i))
    values = [fib[i] for i in order]
    out = []
    for ell in range(ell_lo, ell_hi + 1):
        target = ell * 2**ell + 1
        if target > 2 * values[-1]:
            break
        # the larger term is at least half the target
        lo = bisect_left(values, (target + 1) // 2)
        hi = bisect_right(values, target)
        for pos in range(lo, hi):
            n1 = order[pos]
            rest = target - fib[n1]
            for p2 in range(bisect_left(values, rest), bisect_right(values, rest)):
                n2 = order[p2]
                if n2 < n1:
                    out.append(SolutionTuple((n1, n2), ell))
    return out


def _chunks(lo: int, hi: int, parts: int):
    parts = max(1, min(parts, hi - lo + 1))
    step = -(-(hi - lo + 1) // parts)
    return [(a, min(a + step - 1, hi)) for a in range(lo, hi + 1, step)]


def search_fibonacci(ell_max: int, n1_max: int, workers: int = 1) -> list[SolutionTuple]:
    """All ``F_{n_1} + F_{n_2} = ell 2**ell + 1`` with ``n_1 >= n_2 >= 0`` in the box.

    Equal indices are ruled out by parity; for ``n_1 > n_2`` the larger term
    satisfies ``F_{n_1} >= N / 2``, so only the few table entries in
    ``[N/2, N]`` are candidates.
    """
    if ell_max < 0 or n1_max < 0:
        return []
    if not parity_excludes_equal_indices().ok:
        raise AssertionError("parity brute force found an equal-index solution")
    jobs = [(a, b, n1_max) for a, b in _chunks(0, ell_max, workers)]
    if workers <= 1:
        results = [_fibonacci_range(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_fibonacci_range, jobs))
    return canonical(s for chunk in results for s in chunk)


def naive_fibonacci(ell_max: int, n1_max: int) -> list[SolutionTuple]:
    """Triple loop oracle (including ``n_1 = n_2``)."""
    fib = eval_terms(FIBONACCI, 0, n1_max)
    out = []
    for ell in range(ell_max + 1):
        target = ell * 2**ell + 1
        for n1 in range(n1_max + 1):
            for n2 in range(n1 + 1):
                if fib[n1] + fib[n2] == target:
                    out.append(SolutionTuple((n1, n2), ell))
    return canonical(out)


# -- general instances ----------------------------------------------------------

def _extreme_sums(values: list[int], k: int):
    """``low[m][j]`` / ``high[m][j]``: sum of the j smallest / largest of values[:m]."""
    low, high = [], []
    smallest: list[int] = []
    largest: list[int] = []
    for m in range(len(values) + 1):
        low.append([sum(smallest[:j]) if j <= len(smallest) else None for j in range(k + 1)])
        high.append([sum(largest[:j]) if j <= len(largest) else None for j in range(k + 1)])
        if m < len(values):
            v = values[m]
            smallest = sorted(smallest + [v])[:k]
            largest = sorted(largest + [v], reverse=True)[:k]
    return low, high


def _general_range(args):
    spec, shift, x, k, ell_lo, ell_hi, n1_max = args
    values = eval_terms(spec, 0, n1_max)
    low, high = _extreme_sums(values, k)
    where: dict[int, list[int]] = {}
    for i, v in enumerate(values):
        where.setdefault(v, []).append(i)

    def pick(rest: int, j: int, below: int, chosen: list, out: list, ell: int):
        # j more strictly smaller indices, all < below, must sum to rest
        if j == 0:
            if rest == 0:
                out.append(SolutionTuple(tuple(chosen), ell, x))
            return
        lo, hi = low[below][j], high[below][j]
        if lo is None or not lo <= rest <= hi:
            return
        if j == 1:
            for n in where.get(rest, ()):
                if n < below:
                    out.append(SolutionTuple(tuple(chosen + [n]), ell, x))
            return
        for n in range(below - 1, j - 2, -1):
            pick(rest - values[n], j - 1, n, chosen + [n], out, ell)

    out: list = []
    for ell in range(ell_lo, ell_hi + 1):
        target = ell * x**ell + shift
        pick(target, k, n1_max + 1, [], out, ell)
    return out


def search_general(
    instance: ProblemInstance, n1_max: int, ell_max: int, workers: int = 1, ell_min: int = 0
) -> list[SolutionTuple]:
    """All strictly descending ``n_1 > ... > n_k >= 0`` and ``ell_min <= ell <= ell_max``.

    Branch-and-bound: a partial choice is abandoned when the remaining target
    lies outside ``[sum of the j smallest, sum of the j largest]`` of the
    admissible terms, which is valid for any sequence (monotone or not).
    """
    if n1_max < 0 or ell_max < ell_min:
        return []
    jobs = [
        (instance.spec, instance.shift_value, instance.x, instance.k, a, b, n1_max)
        for a, b in _chunks(ell_min, ell_max, workers)
    ]
    if workers <= 1:
        results = [_general_range(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_general_range, jobs))
    return canonical(s for chunk in results for s in chunk)


def naive_general(instance: ProblemInstance, n1_max: int, ell_max: int, ell_min: int = 0) -> list[SolutionTuple]:
    """Plain enumeration over all descending tuples (oracle for small boxes)."""
    from itertools import combinations

    values = eval_terms(instance.spec, 0, n1_max)
    out = []
    for ell in range(ell_min, ell_max + 1):
        target = ell * instance.x**ell + instance.shift_value
        for combo in combinations(range(n1_max + 1), instance.k):
            if sum(values[i] for i in combo) == target:
                out.append(SolutionTuple(tuple(sorted(combo, reverse=True)), ell, instance.x))
    return canonical(out)


# -- counterexample --------------------------------------------------------------

@dataclass
class CounterexampleCertificate:
    spec: RecurrenceSpec
    base_period_checks: list = field(default_factory=list)
    dominant_coefficient_zero: bool = False
    coefficient_witness: str = ""
    factorization: tuple | None = None
    irreducible: bool | None = None
    verified_k_range: int = -1
    family_failures: list = field(default_factory=list)

    @property
    def periodic(self) -> bool:
        return bool(self.base_period_checks) and all(c["holds"] for c in self.base_period_checks)

    @property
    def complete(self) -> bool:
        return (
            self.periodic
            and self.dominant_coefficient_zero
            and self.factorization is not None
            and self.irreducible is False
            and not self.family_failures
        )

    def to_json(self) -> dict:
        return {
            "coefficients": [str(a) for a in self.spec.coefficients],
            "initials": [str(u) for u in self.spec.initials],
            "base_period_checks": [
                {"n": str(c["n"]), "G_n_plus_6": str(c["G_n_plus_6"]), "G_n": str(c["G_n"]), "holds": c["holds"]}
                for c in self.base_period_checks
            ],
            "dominant_coefficient_zero": self.dominant_coefficient_zero,
            "coefficient_witness": self.coefficient_witness,
            "factorization": None if self.factorization is None else [str(p) for p in self.factorization],
            "irreducible": self.irreducible,
            "verified_k_range": str(self.verified_k_range),
            "family_failures": [str(k) for k in self.family_failures[:20]],
            "complete": self.complete,
        }


def verify_counterexample(k_max: int = 10**4, spec: RecurrenceSpec = COUNTEREXAMPLE) -> CounterexampleCertificate:
    """Certify the order-3 counterexample ``G_n = 1 * 2**1 - 1`` for ``n = 6k+1, 6k+2``.

    ``G_6 = G_0``, ``G_7 = G_1``, ``G_8 = G_2`` and linearity give period 6 for
    every ``n``; the dominant root 2 carries an exactly zero coefficient
    because ``P(2) = 0`` for the integer Binet numerator ``P``.
    """
    cert = CounterexampleCertificate(spec)
    top = max(8, 6 * max(k_max, 0) + 2)
    terms = eval_terms(spec, 0, top)
    for n in range(3):
        cert.base_period_checks.append({"n": n, "G_n_plus_6": terms[n + 6], "G_n": terms[n], "holds": terms[n + 6] == terms[n]})

    poly = char_poly(spec)
    numerator = binet_numerator(spec)
    common = polynomial_gcd(numerator, poly)
    # the dominant root of the counterexample polynomial is 2
    cert.dominant_coefficient_zero = poly(2) == 0 and numerator(2) == 0
    cert.coefficient_witness = f"P(x) = {numerator}, gcd(P, f) = {common}, P(2) = {numerator(2)}"
    if poly(2) == 0:
        linear = IntegerPolynomial((-2, 1))
        cert.factorization = (linear, exact_divide(poly, linear))
    cert.irreducible = check_hypotheses(spec).irreducible

    rhs = 1 * 2**1 - 1
    for k in range(max(k_max, 0) + 1):
        if k_max <= 0:
            break
        for n in (6 * k + 1, 6 * k + 2):
            if terms[n] != rhs:
                cert.family_failures.append(k)
                break
    cert.verified_k_range = k_max
    return cert
