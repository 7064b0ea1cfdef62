"""Empirical coverage of rank intervals over an m sweep for the four benchmark cases.

Writes one CSV per mode with columns case,criterion,mode,m,reps,coverage,mc_stderr,
ready to plot as coverage against m (one line per case and criterion).

    python scripts/coverage_sweep.py --reps 1000 --out results/coverage
"""

import argparse
import time
from pathlib import Path

from pdrank.cli import parse_sweep
from pdrank.criteria import Criterion
from pdrank.inference import Mode, Quantile
from pdrank.report import write_coverage_csv
from pdrank.simulation import benchmark_case, coverage_sweep


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=1000)
    ap.add_argument("--m-sweep", default="5:55:5")
    ap.add_argument("--cases", default="1,2,3,4")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--level", type=float, default=0.95)
    ap.add_argument("--quantile", choices=[q.value for q in Quantile], default=Quantile.CODE.value)
    ap.add_argument("--out", type=Path, default=Path("results/coverage"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    ms = parse_sweep(args.m_sweep)

    for mode in Mode:
        reports = []
        for case in (int(c) for c in args.cases.split(",")):
            for crit in (Criterion.CPDP, Criterion.CTPDP):
                start = time.perf_counter()
                rows = coverage_sweep(benchmark_case(case, seed=args.seed), ms, args.reps, args.level, mode, crit, Quantile(args.quantile))
                reports += rows
                curve = " ".join(f"{r.coverage:.3f}" for r in rows)
                print(f"{mode.value:<12} case{case} {crit.value:<5} {curve}  ({time.perf_counter() - start:.0f}s)")
        path = args.out / f"coverage_{mode.value}.csv"
        path.write_text(write_coverage_csv(reports))
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
