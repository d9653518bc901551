"""Search the Fibonacci/Cullen box and certify the order-3 counterexample."""

import argparse
import time

from cullen_sums.baker import FIBONACCI_CULLEN
from cullen_sums.search import certify_solution, search_fibonacci, verify_counterexample


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ell-max", type=int, default=135)
    parser.add_argument("--n1-max", type=int, default=200)
    parser.add_argument("--k-max", type=int, default=10**4)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    start = time.perf_counter()
    solutions = search_fibonacci(args.ell_max, args.n1_max, args.workers)
    elapsed = time.perf_counter() - start
    print(f"F_n1 + F_n2 = ell 2^ell + 1 with ell <= {args.ell_max}, n_1 <= {args.n1_max} ({elapsed:.3f}s):")
    for s in solutions:
        ok = certify_solution(FIBONACCI_CULLEN, s, allow_equal=True)
        print(f"  (n_1, n_2, ell) = {tuple(s.as_list())}  exact check {'ok' if ok else 'FAILED'}")

    cert = verify_counterexample(args.k_max)
    print(f"\ncounterexample G_n = 3G_(n-1) - 3G_(n-2) + 2G_(n-3), G = (0, 1, 1):")
    print(f"  period 6: {cert.periodic}; dominant coefficient zero: {cert.dominant_coefficient_zero}")
    print(f"  factorization: ({cert.factorization[0]})({cert.factorization[1]})")
    print(f"  G_(6k+1) = G_(6k+2) = 1 = 1*2^1 - 1 for k <= {args.k_max}: {not cert.family_failures}")


if __name__ == "__main__":
    main()
