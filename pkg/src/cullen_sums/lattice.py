"""Exact LLL and de Weger approximation-lattice reduction.

Everything is done over the integers and rationals: Gram--Schmidt data are
``Fraction`` objects, so the size-reduction and Lovasz conditions hold
exactly.  Dimensions here are tiny (at most four), which keeps exact
arithmetic cheap even for entries around ``10**80``.

The reduction of ``|sum b_j theta_j + beta|`` over a box ``|b_j| <= X_j``
follows the usual approximation lattice: an identity block over all but the
last variable and a last row ``floor(C theta_j)``; the target vector is
``(0, ..., 0, -floor(C beta))``.  A certified lower bound on the distance
from the target to the lattice turns into a lower bound on ``|Lambda|``.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import islice
from typing import Sequence

from mpmath import iv, mp

from .errors import PrecisionExhausted, ScaleCapExceeded, SingularBasis
from .intervals import (
    contains_zero,
    exact_bounds,
    float_bounds,
    hull,
    iabs,
    interval,
    lower,
    short,
    upper,
    working_precision,
)

log = logging.getLogger(__name__)

DEFAULT_DELTA = Fraction(3, 4)
MAX_RETRIES = 10
CAMPAIGN_PRECISION = 1024


# -- lattices ------------------------------------------------------------------

@dataclass(frozen=True)
class IntegerLattice:
    """Full-rank lattice given by integer column vectors."""

    columns: tuple

    def __post_init__(self):
        cols = tuple(tuple(int(x) for x in c) for c in self.columns)
        object.__setattr__(self, "columns", cols)
        m = len(cols)
        if m == 0 or any(len(c) != m for c in cols):
            raise ValueError("basis must be a non-empty square matrix")
        if self.determinant() == 0:
            raise SingularBasis("basis vectors are linearly dependent")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntegerLattice":
        return cls(tuple(zip(*rows)))

    @property
    def dimension(self) -> int:
        return len(self.columns)

    def determinant(self) -> int:
        return _determinant([list(c) for c in self.columns])

    def coordinates(self, vector) -> list[Fraction]:
        """Rational coordinates of ``vector`` in this basis."""
        return _solve([list(c) for c in self.columns], [Fraction(v) for v in vector])

    def contains(self, vector) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(vector))

    def same_lattice(self, other: "IntegerLattice") -> bool:
        return all(other.contains(c) for c in self.columns) and all(self.contains(c) for c in other.columns)


def _determinant(cols) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in zip(*cols)]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _solve(cols, rhs) -> list[Fraction]:
    """Solve ``sum x_j cols[j] = rhs`` exactly."""
    n = len(cols)
    a = [[Fraction(cols[j][i]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            raise SingularBasis("basis vectors are linearly dependent")
        a[k], a[p] = a[p], a[k]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k] / a[k][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [a[i][n] / a[i][i] for i in range(n)]


def _dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def gram_schmidt(vectors) -> tuple[list, list, list]:
    """Exact ``(b*, mu, |b*|^2)`` for a list of integer vectors."""
    n = len(vectors)
    bstar: list = []
    norms: list = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i, v in enumerate(vectors):
        w = [Fraction(x) for x in v]
        for j in range(i):
            mu[i][j] = _dot(v, bstar[j]) / norms[j]
            w = [x - mu[i][j] * y for x, y in zip(w, bstar[j])]
        mu[i][i] = Fraction(1)
        bstar.append(w)
        norms.append(_dot(w, w))
        if norms[-1] == 0:
            raise SingularBasis("basis vectors are linearly dependent")
    return bstar, mu, norms


def lll_reduce(lattice: IntegerLattice, delta: Fraction = DEFAULT_DELTA) -> IntegerLattice:
    """Lovasz-reduced basis of the same lattice (exact rational arithmetic)."""
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError("delta must lie in (1/4, 1)")
    b = [list(c) for c in lattice.columns]
    n = len(b)
    _, mu, norms = gram_schmidt(b)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                for i in range(j + 1):
                    mu[k][i] -= q * mu[j][i]
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            _, mu, norms = gram_schmidt(b)
            k = max(k - 1, 1)
    return IntegerLattice(tuple(tuple(v) for v in b))


def is_lll_reduced(lattice: IntegerLattice, delta: Fraction = DEFAULT_DELTA) -> bool:
    _, mu, norms = gram_schmidt([list(c) for c in lattice.columns])
    n = len(norms)
    size = all(abs(mu[i][j]) <= Fraction(1, 2) for i in range(n) for j in range(i))
    lovasz = all(norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1] for k in range(1, n))
    return size and lovasz


def _sqrt_floor(q: Fraction, bits: int = 64) -> Fraction:
    """Rational lower bound on ``sqrt(q)`` with absolute error below ``2**-bits``."""
    scaled = q * 4**bits
    return Fraction(math.isqrt(scaled.numerator // scaled.denominator), 2**bits)


def shortest_vector_floor(reduced: IntegerLattice) -> Fraction:
    """``|b_1| / 2**((m-1)/2)``, a lower bound on every nonzero lattice vector."""
    m = reduced.dimension
    b1 = reduced.columns[0]
    return _sqrt_floor(Fraction(_dot(b1, b1), 2 ** (m - 1)))


@lru_cache(maxsize=256)
def _reduced_with_gso(columns: tuple):
    reduced = lll_reduce(IntegerLattice(columns))
    _, _, norms = gram_schmidt([list(c) for c in reduced.columns])
    return reduced, tuple(norms)


def distance_floor_squared(reduced: IntegerLattice, norms, target) -> Fraction:
    """Lower bound on the squared distance from ``target`` to the lattice.

    With ``target = sum sigma_i b_i`` and ``i0`` the last index where
    ``sigma_i`` is not an integer, every lattice vector ``v`` has
    ``|target - v| >= ||sigma_i0|| * min_{k >= i0} |b*_k|``.  Returns 0 when
    the target is itself a lattice vector.
    """
    sigma = reduced.coordinates(target)
    frac = [i for i, s in enumerate(sigma) if s.denominator != 1]
    if not frac:
        return Fraction(0)
    i0 = frac[-1]
    s = sigma[i0]
    dist = abs(s - round(s))
    return dist**2 * min(norms[i0:])


# -- inhomogeneous reduction -----------------------------------------------------

@dataclass(frozen=True)
class ReductionProblem:
    """Reduce ``|Lambda| = |sum b_j theta_j + beta|`` over ``|b_j| <= X_j``.

    The analytic side supplies ``|Lambda| <= K rho**(-T)`` valid once
    ``T >= decay_valid_from``; a certified ``|Lambda| >= lambda`` then gives
    ``T <= log(K / lambda) / log(rho)``.
    """

    thetas: tuple
    variable_bounds: tuple
    constant: object
    decay: tuple
    scale: int | None = None
    decay_valid_from: int = 0
    label: tuple = ()

    def __post_init__(self):
        if len(self.thetas) != len(self.variable_bounds) or not self.thetas:
            raise ValueError("one bound per theta required")
        if any(int(x) < 0 for x in self.variable_bounds):
            raise ValueError("variable bounds must be non-negative")
        K, rho = self.decay
        if not (interval(K).a > 0 and interval(rho).a > 1):
            raise ValueError("decay needs K > 0 and rho > 1")

    @property
    def initial_scale(self) -> int:
        if self.scale is not None:
            return int(self.scale)
        return math.prod(max(int(x), 1) for x in self.variable_bounds) * 100


@dataclass(frozen=True)
class ReductionOutcome:
    success: bool
    lambda_lower: object
    new_bound: int | None
    attempts: tuple = ()
    scale_used: int | None = None

    def to_json(self) -> dict:
        lam = None if self.lambda_lower is None else repr(float_bounds(self.lambda_lower)[0])
        return {
            "success": self.success,
            "C_used": None if self.scale_used is None else str(self.scale_used),
            "lambda_lower": lam,
            "new_bound": None if self.new_bound is None else str(self.new_bound),
            "attempts": [str(c) for c in self.attempts],
        }


def _floor_certain(x) -> int:
    lo, hi = exact_bounds(x)
    a, b = math.floor(lo), math.floor(hi)
    if a != b:
        raise PrecisionExhausted("scaled logarithm straddles an integer; raise the precision")
    return a


def _attempt(problem: ReductionProblem, C: int):
    """One scale: returns ``(lambda_lower, target_in_lattice)``."""
    m = len(problem.thetas)
    row = [_floor_certain(C * interval(t)) for t in problem.thetas]
    if row[-1] == 0:
        return None, False
    columns = tuple(
        tuple([1 if i == j else 0 for i in range(m - 1)] + [row[j]]) for j in range(m)
    )
    beta = interval(problem.constant)
    mid = (lower(beta) + upper(beta)) / 2
    target_last = -int(mp.floor(C * mid))
    target = [0] * (m - 1) + [target_last]
    reduced, norms = _reduced_with_gso(columns)
    l2 = distance_floor_squared(reduced, norms, target)
    if l2 == 0:
        return None, True
    S = sum(Fraction(int(x)) ** 2 for x in problem.variable_bounds[:-1])
    e_beta = iabs(C * beta + target_last)
    T = iv.mpf(sum(int(x) for x in problem.variable_bounds)) + e_beta
    T_hi = exact_bounds(T)[1]
    if not l2 > S + T_hi**2:
        return None, False
    root = iv.sqrt(interval(l2 - S))
    lam = (root - T) / C
    if not lam.a > 0:
        return None, False
    return iv.mpf([lower(lam), lower(lam)]), False


def reduce_inhomogeneous(
    problem: ReductionProblem, max_retries: int = MAX_RETRIES, precision: int = CAMPAIGN_PRECISION
) -> ReductionOutcome:
    """de Weger reduction with the scale multiplied by 10 after each failure.

    Returns ``success=False`` when the target lies in the lattice and the
    constant may be 0 (the form can genuinely vanish).  Raises
    :class:`ScaleCapExceeded` if no scale up to ``C * 10**max_retries`` works.
    """
    C = problem.initial_scale
    attempts = []
    with working_precision(precision):
        for _ in range(max_retries + 1):
            if C.bit_length() + 64 > precision:
                raise PrecisionExhausted(f"scale {C} needs more than {precision} bits of the logarithms")
            attempts.append(C)
            lam, in_lattice = _attempt(problem, C)
            if lam is not None:
                K, rho = (interval(v) for v in problem.decay)
                raw = iv.log(K / lam) / iv.log(rho)
                bound = max(int(mp.ceil(upper(raw))), problem.decay_valid_from - 1, 0)
                return ReductionOutcome(True, lam, bound, tuple(attempts), C)
            if in_lattice and contains_zero(problem.constant):
                return ReductionOutcome(False, None, None, tuple(attempts), C)
            C *= 10
    raise ScaleCapExceeded(
        f"reduction inconclusive up to C = {attempts[-1]}", subproblem=problem.label, report=None
    )


# -- the Fibonacci / Cullen campaign ----------------------------------------------

@dataclass(frozen=True)
class _Constants:
    log2: object
    log_alpha: object
    log_sqrt5: object
    alpha: object
    K: object


def _constants(precision: int) -> _Constants:
    with working_precision(precision):
        sqrt5 = iv.sqrt(iv.mpf(5))
        alpha = (1 + sqrt5) / 2
        # |e^L - 1| <= K0 rho^-T <= 1/2 implies |L| <= 2 K0 rho^-T
        K = 2 * (2 * sqrt5 + 1)
        return _Constants(iv.log(iv.mpf(2)), iv.log(alpha), iv.log(sqrt5), alpha, K)


# (2 sqrt5 + 1) alpha^-T <= 1/2 holds for T >= 5
DECAY_VALID_FROM = 5


def _ell_pieces(ell_max: int, enumerate_cap: int) -> list[tuple[int, int]]:
    """Singletons below ``enumerate_cap``, dyadic ranges above (ell >= 2)."""
    pieces = [(v, v) for v in range(2, min(enumerate_cap, ell_max + 1))]
    lo = max(enumerate_cap, 2)
    while lo <= ell_max:
        hi = min(2 * lo - 1, ell_max)
        pieces.append((lo, hi))
        lo = hi + 1
    return pieces


def _subproblem(stage: int, piece, d: int | None, n1_max: int, consts: _Constants) -> ReductionProblem:
    lo, hi = piece
    shift = iv.mpf(0) if d is None else iv.log(1 + consts.alpha ** (-d))
    if lo == hi:
        beta = lo * consts.log2 + consts.log_sqrt5 + iv.log(iv.mpf(lo)) - shift
        thetas, bounds = (-consts.log_alpha,), (n1_max,)
    else:
        beta = hull(consts.log_sqrt5 + iv.log(iv.mpf(lo)), consts.log_sqrt5 + iv.log(iv.mpf(hi))) - shift
        thetas, bounds = (consts.log2, -consts.log_alpha), (hi, n1_max)
    label = (("stage", stage), ("ell_lo", lo), ("ell_hi", hi), ("d", d))
    return ReductionProblem(thetas, bounds, beta, (consts.K, consts.alpha), None, DECAY_VALID_FROM, label)


@lru_cache(maxsize=1)
def _campaign_constants() -> _Constants:
    return _constants(CAMPAIGN_PRECISION)


def _run(task):
    """Solve one campaign subproblem; ``task`` is a plain (picklable) tuple."""
    stage, piece, d, n1_max = task
    with working_precision(CAMPAIGN_PRECISION):
        problem = _subproblem(stage, piece, d, n1_max, _campaign_constants())
        try:
            out = reduce_inhomogeneous(problem)
        except ScaleCapExceeded as exc:
            return problem.label, None, str(exc)
    if not out.success:
        return problem.label, None, "target vector lies in the lattice"
    return problem.label, (_record(problem.label, out), out.new_bound), None


def _record(label, outcome: ReductionOutcome) -> dict:
    info = dict(label)
    return {
        "stage": info["stage"],
        "subproblem": {
            "ell_lo": str(info["ell_lo"]),
            "ell_hi": str(info["ell_hi"]),
            "d": None if info["d"] is None else str(info["d"]),
        },
        "C_used": str(outcome.scale_used),
        "lambda_lower": repr(float_bounds(outcome.lambda_lower)[0]),
        "new_bound": str(outcome.new_bound),
    }


@dataclass
class CampaignReport:
    stage: int
    n1_max: int
    ell_max: int
    gap_bound: int | None = None
    absolute_bound: int | None = None
    records: list = field(default_factory=list)
    failure: dict | None = None

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "n1_max": str(self.n1_max),
            "ell_max": str(self.ell_max),
            "gap_bound": None if self.gap_bound is None else str(self.gap_bound),
            "absolute_bound": None if self.absolute_bound is None else str(self.absolute_bound),
            "subproblems": len(self.records),
            "records": self.records,
            "failure": self.failure,
        }

    def summary(self) -> str:
        lines = [f"stage {self.stage}: n1_max={self.n1_max:.3e} ell_max={self.ell_max:.3e}, {len(self.records)} subproblems certified"]
        if self.gap_bound is not None:
            lines.append(f"  n_1 - n_2 <= {self.gap_bound}")
        if self.absolute_bound is not None:
            lines.append(f"  n_1 <= {self.absolute_bound}")
        if self.failure:
            lines.append(f"  FAILED at {self.failure['subproblem']}: {self.failure['reason']}")
        return "\n".join(lines)


def _execute(tasks, workers: int, batch: int = 256):
    """Yield ``_run`` results in order, consuming ``tasks`` lazily."""
    if workers <= 1:
        for t in tasks:
            yield _run(t)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        while chunk := list(islice(tasks, batch * workers)):
            yield from pool.map(_run, chunk, chunksize=max(1, batch // 4))


def fibonacci_reduction_campaign(
    prebounds: dict,
    stage: int = 1,
    gap_bound: int | None = None,
    enumerate_cap: int = 2**12,
    workers: int = 1,
) -> CampaignReport:
    """Reduce the Fibonacci/Cullen bounds subproblem by subproblem.

    Stage 1 bounds ``T = n_1 - n_2`` through ``ell log 2 - n_1 log alpha +
    log(sqrt5 ell)``; stage 2 bounds ``T = n_1`` for every gap ``d <=
    gap_bound`` through the same form shifted by ``-log(1 + alpha**-d)``.
    Small ``ell`` are enumerated one by one (the constant is then a point);
    larger ``ell`` are grouped dyadically, which turns the constant into an
    interval of width ``log 2``.  Ranged subproblems are attempted first so a
    failure surfaces immediately; the first failure raises
    :class:`ScaleCapExceeded` carrying the partial report.
    """
    n1_max, ell_max = int(prebounds["n1_max"]), int(prebounds["ell_max"])
    if stage not in (1, 2):
        raise ValueError("stage must be 1 or 2")
    if stage == 2 and gap_bound is None:
        raise ValueError("stage 2 needs the stage-1 gap bound")
    pieces = _ell_pieces(ell_max, enumerate_cap)
    pieces.sort(key=lambda p: (p[0] == p[1], p[0]))
    gaps = [None] if stage == 1 else list(range(1, int(gap_bound) + 1))
    tasks = ((stage, piece, d, n1_max) for piece in pieces for d in gaps)
    report = CampaignReport(stage, n1_max, ell_max)
    best = DECAY_VALID_FROM - 1
    for label, result, error in _execute(tasks, workers):
        if result is None:
            info = dict(label)
            report.failure = {
                "subproblem": {k: (None if v is None else str(v)) for k, v in info.items()},
                "reason": error,
            }
            raise ScaleCapExceeded(f"stage {stage} subproblem {info} inconclusive", subproblem=info, report=report)
        record, new_bound = result
        report.records.append(record)
        best = max(best, new_bound)
    report.records.sort(key=lambda r: (int(r["subproblem"]["ell_lo"]), int(r["subproblem"]["d"] or 0)))
    if stage == 1:
        report.gap_bound = best
    else:
        report.absolute_bound = best
    return report
