"""Rank the 2014 week-12 quarterbacks and write point ranks, rank intervals and SSE.

    python scripts/nfl_analysis.py --out results/nfl
"""

import argparse
from pathlib import Path

from pdrank.cli import cmd_ci, cmd_rank, cmd_sse
from pdrank.criteria import Criterion
from pdrank.inference import Mode, rank_cis
from pdrank.report import load_nfl


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results/nfl"))
    ap.add_argument("--level", type=float, default=0.95)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    matrix = load_nfl()
    (args.out / "point_ranks.csv").write_text(cmd_rank(matrix))
    (args.out / "rank_cis.csv").write_text(cmd_ci(matrix, args.level))
    (args.out / "sse.csv").write_text(cmd_sse(matrix, ["cpdp", "ctpdp"]))
    (args.out / "sse_by_expert.csv").write_text(cmd_sse(matrix, ["cpdp", "ctpdp"], breakdown=True))

    for crit in (Criterion.CPDP, Criterion.CTPDP):
        sim = rank_cis(matrix, crit, args.level, Mode.SIMULTANEOUS)
        ind = rank_cis(matrix, crit, args.level, Mode.INDIVIDUAL)
        print(f"\n{crit.value.upper()}  {'player':<20} rank  simultaneous  individual")
        order = sorted(range(matrix.n_entities), key=lambda i: (sim.ranks.display[i], i))
        for i in order:
            s, d = sim.intervals[i], ind.intervals[i]
            print(f"      {matrix.entities[i]:<20} {sim.ranks.display[i]:>4}  [{s.lower:>2},{s.upper:>2}]       [{d.lower:>2},{d.upper:>2}]")
    print()
    print(cmd_sse(matrix, ["cpdp", "ctpdp"]))
    print(f"wrote {args.out}/")


if __name__ == "__main__":
    main()
