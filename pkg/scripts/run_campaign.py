"""Run the two-stage lattice reduction campaign and report what it achieved.

With the default (analytic) prebounds the dyadic ell ranges cannot be
certified and the run stops at the first such range; use --n1-max and
--ell-max to run the full pipeline on a smaller box.
"""

import argparse
import json
import time

from cullen_sums.baker import MODES, REPLAY, fibonacci_bound_chain, prebounds
from cullen_sums.errors import ScaleCapExceeded
from cullen_sums.lattice import fibonacci_reduction_campaign


def run_stage(bounds, stage, gap, args):
    start = time.perf_counter()
    try:
        report = fibonacci_reduction_campaign(bounds, stage, gap, args.enumerate_cap, args.workers)
    except ScaleCapExceeded as exc:
        print(f"stage {stage}: FAILED after {time.perf_counter() - start:.1f}s")
        print(exc.report.summary() if exc.report else exc)
        return None
    print(f"stage {stage}: {time.perf_counter() - start:.1f}s")
    print(report.summary())
    if args.output:
        with open(f"{args.output}.stage{stage}.json", "w", encoding="utf-8") as fh:
            json.dump(report.to_json(), fh, indent=2)
    return report


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--mode", choices=MODES, default=REPLAY)
    parser.add_argument("--n1-max", type=int)
    parser.add_argument("--ell-max", type=int)
    parser.add_argument("--gap", type=int, help="skip stage 1 and use this gap bound")
    parser.add_argument("--enumerate-cap", type=int, default=2**12)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--output", help="prefix for per-stage JSON reports")
    args = parser.parse_args()

    bounds = prebounds(fibonacci_bound_chain(args.mode))
    if args.n1_max is not None:
        bounds["n1_max"] = args.n1_max
    if args.ell_max is not None:
        bounds["ell_max"] = args.ell_max
    print(f"prebounds: n_1 <= {bounds['n1_max']:.4e}, ell <= {bounds['ell_max']:.4e}")

    gap = args.gap
    if gap is None:
        first = run_stage(bounds, 1, None, args)
        if first is None:
            return 4
        gap = first.gap_bound
    second = run_stage(bounds, 2, gap, args)
    return 0 if second is not None else 4


if __name__ == "__main__":
    raise SystemExit(main())
