"""Command-line interface.

    pdrank rank FILE                      point ranks (CPDP, CTPDP, Borda, Copeland)
    pdrank ci FILE --mode individual      rank confidence intervals
    pdrank simulate --case 1 --m-sweep 5:55:5
    pdrank sse FILE --method cpdp --method ctpdp

Errors go to stderr as ``error[CODE]: message`` with a non-zero exit status.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from pathlib import Path

from .criteria import Criterion, IncompleteDataError, point_ranks, point_scores
from .dominance import NoCommonRankerError, dominance_matrix
from .inference import Mode, Quantile, rank_cis
from .rankmatrix import Orientation, RankMatrix
from .report import (
    InputError,
    ci_records,
    parse_input,
    parse_rank_vector,
    point_records,
    sse,
    write_coverage_csv,
    write_results_csv,
    write_results_json,
)
from .simulation import (
    Missingness,
    Scenario,
    benchmark_case,
    coverage_sweep,
    true_scores,
)

EXIT_CODES = {
    "E_USAGE": 2,
    "E_IO": 3,
    "E_MALFORMED": 4,
    "E_DUPLICATE_LABEL": 5,
    "E_DUPLICATE_RANK": 6,
    "E_EMPTY_COLUMN": 7,
    "E_NONPOSITIVE": 8,
    "E_SHAPE": 9,
    "E_NONFINITE": 10,
    "E_NO_COMMON_RANKER": 11,
    "E_INCOMPLETE": 12,
    "E_MISSING_ENTITY": 13,
}


class CLIError(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


def _orientation(value: str) -> Orientation:
    return Orientation(value)


def _criteria(values: list[str] | None, default: tuple[Criterion, ...]) -> list[Criterion]:
    if not values:
        return list(default)
    return [Criterion(v) for v in values]


def _render(records, fmt: str, **meta) -> str:
    if fmt == "csv":
        return write_results_csv(records)
    return write_results_json(records, **meta)


# -- commands ----------------------------------------------------------------


def cmd_rank(matrix: RankMatrix, fmt: str = "csv") -> str:
    criteria = [Criterion.CPDP, Criterion.CTPDP]
    if matrix.is_complete:
        criteria += [Criterion.BORDA, Criterion.COPELAND]
    dom = dominance_matrix(matrix)
    records = []
    for c in criteria:
        records += point_records(matrix.entities, point_scores(matrix, c, dom))
    return _render(records, fmt, command="rank", entities=matrix.n_entities, rankers=matrix.n_rankers)


def cmd_ci(
    matrix: RankMatrix,
    level: float = 0.95,
    modes: list[Mode] | None = None,
    criteria: list[Criterion] | None = None,
    quantile: Quantile = Quantile.CODE,
    fmt: str = "csv",
) -> str:
    records = []
    for c in criteria or [Criterion.CPDP, Criterion.CTPDP]:
        for mode in modes or [Mode.SIMULTANEOUS, Mode.INDIVIDUAL]:
            records += ci_records(rank_cis(matrix, c, level, mode, quantile))
    return _render(records, fmt, command="ci", level=level, individual_quantile=quantile.value)


def format_truth_table(scenario: Scenario) -> str:
    truth = true_scores(scenario)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["entity", "mean", "variance", "cpdp", "cpdp_rank", "ctpdp", "ctpdp_rank"])
    for i in range(scenario.n):
        writer.writerow(
            [
                f"X{i + 1}",
                f"{scenario.means[i]:g}",
                f"{scenario.variances[i]:g}",
                f"{truth.cpdp[i]:.4f}",
                int(truth.cpdp_rank[i]),
                int(truth.ctpdp[i]),
                int(truth.ctpdp_rank[i]),
            ]
        )
    return buf.getvalue()


def load_scenario(path: str | Path) -> Scenario:
    cfg = json.loads(Path(path).read_text(encoding="utf-8"))
    miss = cfg.get("missingness")
    return Scenario(
        tuple(cfg["means"]),
        tuple(cfg["variances"]),
        int(cfg.get("m", 30)),
        Missingness(**miss) if miss else None,
        int(cfg.get("seed", 0)),
        cfg.get("name", Path(path).stem),
    )


def parse_sweep(text: str) -> list[int]:
    """``5:55:5`` (inclusive stop) or a comma list ``5,10,30``."""
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        start, stop = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        return list(range(start, stop + 1, step))
    return [int(p) for p in text.split(",")]


def cmd_simulate(
    scenario: Scenario,
    ms: list[int],
    reps: int = 1000,
    level: float = 0.95,
    modes: list[Mode] | None = None,
    criteria: list[Criterion] | None = None,
    quantile: Quantile = Quantile.CODE,
    show_truth: bool = False,
) -> str:
    if show_truth:
        return format_truth_table(scenario)
    reports = []
    for c in criteria or [Criterion.CPDP]:
        for mode in modes or [Mode.SIMULTANEOUS]:
            reports += coverage_sweep(scenario, ms, reps, level, mode, c, quantile)
    return write_coverage_csv(reports)


def cmd_sse(matrix: RankMatrix, methods: list[str] | None = None, rank_files: list[str] | None = None, breakdown: bool = False) -> str:
    columns: list[tuple[str, object]] = []
    for name in methods or []:
        columns.append((name, point_ranks(matrix, Criterion(name)).display))
    for cfg in rank_files or []:
        label, _, path = cfg.rpartition("=")
        path_obj = Path(path)
        try:
            text = path_obj.read_text(encoding="utf-8")
        except OSError as err:
            raise InputError("E_IO", f"cannot read {path_obj}: {err}") from err
        columns.append((label or path_obj.stem, parse_rank_vector(text, str(path_obj))))
    if not columns:
        raise CLIError("E_USAGE", "give at least one --method or --ranks")

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    results = [(label, sse(matrix, ranks)) for label, ranks in columns]
    if breakdown:
        writer.writerow(["method", "ranker", "sse"])
        for label, res in results:
            for ranker, value in res.per_ranker.items():
                writer.writerow([label, ranker, f"{value:g}"])
            writer.writerow([label, "total", f"{res.total:g}"])
    else:
        writer.writerow(["method", "sse"])
        for label, res in results:
            writer.writerow([label, f"{res.total:g}"])
    return buf.getvalue()


# -- argument parsing --------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="CSV with an 'entity' column followed by one column per ranker")
    p.add_argument(
        "--orientation",
        choices=[o.value for o in Orientation],
        default=Orientation.LOWER_IS_BETTER.value,
        help="whether 1 is the best (lower-better, default) or the worst value",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pdrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    criteria = [c.value for c in (Criterion.CPDP, Criterion.CTPDP)]
    modes = [m.value for m in Mode]
    quantiles = [q.value for q in Quantile]

    p = sub.add_parser("rank", help="point ranks under every criterion")
    _add_common(p)
    p.add_argument("--format", choices=["csv", "structured-text"], default="csv")

    p = sub.add_parser("ci", help="simultaneous and individual rank confidence intervals")
    _add_common(p)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--mode", choices=modes, action="append")
    p.add_argument("--criterion", choices=criteria, action="append")
    p.add_argument("--individual-quantile", choices=quantiles, default=Quantile.CODE.value)
    p.add_argument("--format", choices=["csv", "structured-text"], default="csv")

    p = sub.add_parser("simulate", help="empirical coverage of rank intervals")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--case", type=int, choices=[1, 2, 3, 4])
    src.add_argument("--scenario", help="JSON file with means, variances, m, missingness, seed")
    p.add_argument("--m", type=int, default=30)
    p.add_argument("--m-sweep", help="e.g. 5:55:5 (inclusive) or 5,10,30")
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--mode", choices=modes, action="append")
    p.add_argument("--criterion", choices=criteria, action="append")
    p.add_argument("--individual-quantile", choices=quantiles, default=Quantile.CODE.value)
    p.add_argument("--show-truth", action="store_true", help="print the true scores and ranks instead of simulating")

    p = sub.add_parser("sse", help="sum of squared rank errors against each ballot")
    _add_common(p)
    p.add_argument("--method", choices=[c.value for c in Criterion], action="append")
    p.add_argument("--ranks", action="append", help="[label=]path to an entity,rank CSV")
    p.add_argument("--breakdown", action="store_true", help="per-ranker SSE rows")
    return parser


def run(argv: list[str] | None = None) -> str:
    args = build_parser().parse_args(argv)
    if args.command == "simulate":
        if args.case is not None:
            scenario = benchmark_case(args.case, args.m, 0 if args.seed is None else args.seed)
        else:
            try:
                scenario = load_scenario(args.scenario)
            except (OSError, KeyError, TypeError, json.JSONDecodeError) as err:
                raise CLIError("E_MALFORMED", f"bad scenario file {args.scenario}: {err}") from err
            scenario = scenario.with_m(args.m)
            if args.seed is not None:
                scenario = replace(scenario, seed=args.seed)
        ms = parse_sweep(args.m_sweep) if args.m_sweep else [args.m]
        return cmd_simulate(
            scenario,
            ms,
            args.reps,
            args.level,
            [Mode(m) for m in args.mode] if args.mode else None,
            _criteria(args.criterion, (Criterion.CPDP,)),
            Quantile(args.individual_quantile),
            args.show_truth,
        )

    matrix = parse_input(args.input, _orientation(args.orientation))
    if args.command == "rank":
        return cmd_rank(matrix, args.format)
    if args.command == "ci":
        if not 0 < args.level < 1:
            raise CLIError("E_USAGE", f"--level must lie in (0, 1), got {args.level}")
        return cmd_ci(
            matrix,
            args.level,
            [Mode(m) for m in args.mode] if args.mode else None,
            _criteria(args.criterion, (Criterion.CPDP, Criterion.CTPDP)),
            Quantile(args.individual_quantile),
            args.format,
        )
    return cmd_sse(matrix, args.method, args.ranks, args.breakdown)


def main(argv: list[str] | None = None) -> int:
    try:
        out = run(argv)
    except (CLIError, InputError, NoCommonRankerError, IncompleteDataError) as err:
        code = getattr(err, "code", "E_USAGE")
        print(f"error[{code}]: {err}", file=sys.stderr)
        return EXIT_CODES.get(code, 1)
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
