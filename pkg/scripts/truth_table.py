"""Print the exact CPDP and CTPDP scores and ranks for a benchmark case (default 3)."""

import argparse

from pdrank.cli import format_truth_table
from pdrank.simulation import benchmark_case, true_cpdp_variance, true_ctpdp_bound


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--case", type=int, default=3, choices=[1, 2, 3, 4])
    ap.add_argument("--m", type=int, default=30, help="rankers, for the variance columns")
    args = ap.parse_args()
    sc = benchmark_case(args.case, m=args.m)
    print(format_truth_table(sc), end="")
    print(f"\nexact score variances at m = {args.m}")
    print("entity,cpdp_variance,ctpdp_bound")
    for i, (v, b) in enumerate(zip(true_cpdp_variance(sc), true_ctpdp_bound(sc))):
        print(f"X{i + 1},{v:.6f},{b:.6f}")


if __name__ == "__main__":
    main()
