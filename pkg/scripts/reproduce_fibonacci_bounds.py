"""Print the Fibonacci/Cullen constant chain in both modes, side by side."""

import argparse

from cullen_sums.baker import REPLAY, RIGOROUS, fibonacci_bound_chain
from cullen_sums.intervals import DEFAULT_PRECISION, short

TARGETS = {
    "matveev_leading_gap": 1.3e14,
    "gap_coefficient": 7.27e14,
    "absolute_coefficient": 6.9e27,
    "absolute_resolved": 3.1e35,
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    parser.add_argument("--full", action="store_true", help="also print both complete ledgers")
    args = parser.parse_args()

    replay = fibonacci_bound_chain(REPLAY, args.precision)
    rigorous = fibonacci_bound_chain(RIGOROUS, args.precision)
    print(f"{'quantity':<24} {'target':>10} {'replay':>12} {'rigorous':>12}")
    for name, target in TARGETS.items():
        print(f"{name:<24} {target:>10.3g} {short(replay[name], 5):>12} {short(rigorous[name], 5):>12}")
    print(f"{'ell_slope_fibonacci':<24} {0.75:>10} {short(replay['ell_slope_fibonacci'], 5):>12}"
          f"  valid for n_1 >= {short(replay['ell_linear_valid_from'])}")
    print()
    print("four-base vs three-base leading constant of the second form:")
    print(f"  replay   s=3 {short(replay['matveev_leading_absolute'])}   s=4 {short(replay['matveev_leading_absolute_s4'])}")
    print(f"  rigorous s=3 {short(rigorous['matveev_leading_absolute_s3'])}   s=4 {short(rigorous['matveev_leading_absolute'])}")
    if args.full:
        for ledger in (replay, rigorous):
            print(f"\n== {ledger.mode} ==")
            print(ledger.table())


if __name__ == "__main__":
    main()
