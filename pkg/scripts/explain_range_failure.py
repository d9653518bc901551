"""Measure why a dyadic ell-range subproblem cannot be certified.

For each scale C tried by the campaign this prints the LLL floor on the
shortest lattice vector next to C times the width of the constant term.
The reduction can only succeed when the former exceeds the latter.
"""

import argparse

from mpmath import mp

from cullen_sums.baker import REPLAY, fibonacci_bound_chain, prebounds
from cullen_sums.intervals import interval, lower, upper, working_precision
from cullen_sums.lattice import (
    CAMPAIGN_PRECISION,
    MAX_RETRIES,
    IntegerLattice,
    _campaign_constants,
    _floor_certain,
    _subproblem,
    lll_reduce,
    shortest_vector_floor,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--ell-lo", type=int, default=4096)
    parser.add_argument("--stage", type=int, choices=[1, 2], default=1)
    args = parser.parse_args()

    bounds = prebounds(fibonacci_bound_chain(REPLAY))
    piece = (args.ell_lo, 2 * args.ell_lo - 1)
    d = None if args.stage == 1 else 1
    with working_precision(CAMPAIGN_PRECISION):
        problem = _subproblem(args.stage, piece, d, bounds["n1_max"], _campaign_constants())
        beta = interval(problem.constant)
        C = problem.initial_scale
        print(f"ell in [{piece[0]}, {piece[1]}], n_1 <= {bounds['n1_max']:.3e}")
        print(f"{'C':>10}  {'shortest floor':>15}  {'C * width(beta)':>16}  {'X_1 + X_2':>10}")
        for _ in range(MAX_RETRIES + 1):
            row = [_floor_certain(C * interval(t)) for t in problem.thetas]
            lattice = IntegerLattice(((1, row[0]), (0, row[1])))
            floor = shortest_vector_floor(lll_reduce(lattice))
            spread = C * (upper(beta) - lower(beta))
            total = sum(problem.variable_bounds)
            print(f"{mp.nstr(mp.mpf(C), 3):>10}  {mp.nstr(mp.mpf(floor.numerator) / floor.denominator, 4):>15}  {mp.nstr(spread, 4):>16}  {mp.nstr(mp.mpf(total), 3):>10}")
            C *= 10
    print("success needs shortest floor > (C * width(beta) / 2 + X_1 + X_2); the spread grows like C, the floor like sqrt(C)")


if __name__ == "__main__":
    main()
