"""File formats: ballot CSV input, results documents, coverage tables, SSE."""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import asdict, dataclass, fields
from importlib import resources
from pathlib import Path

import numpy as np

from .criteria import ScoreVector, scores_to_ranks
from .inference import RankCIReport
from .rankmatrix import (
    Orientation,
    RankMatrix,
    RankMatrixError,
    validate,
    within_column_ranks,
)
from .simulation import CoverageReport

MISSING_TOKENS = frozenset({"", "NA", "na", "N/A", "NaN", "nan"})
RESULTS_HEADER = ("entity", "criterion", "mode", "level", "score", "variance", "point_rank", "ci_lower", "ci_upper")
COVERAGE_HEADER = ("case", "criterion", "mode", "m", "reps", "coverage", "mc_stderr")


class InputError(ValueError):
    """Malformed input file. ``code`` is a stable machine-readable identifier."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


# -- input -------------------------------------------------------------------


def parse_rank_table(text: str, orientation: Orientation = Orientation.LOWER_IS_BETTER, source: str = "<input>") -> RankMatrix:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputError("E_MALFORMED", f"{source}: file is empty") from None
    header = [h.strip() for h in header]
    if len(header) < 2:
        raise InputError("E_MALFORMED", f"{source}: need an entity column and at least one ranker column")
    width = len(header)
    labels: list[str] = []
    rows: list[list[float]] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != width:
            raise InputError("E_MALFORMED", f"{source}: line {lineno} has {len(row)} fields, expected {width}")
        labels.append(row[0].strip())
        values = []
        for col, cell in enumerate(row[1:], start=2):
            cell = cell.strip()
            if cell in MISSING_TOKENS:
                values.append(math.nan)
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise InputError(
                    "E_MALFORMED", f"{source}: line {lineno}, column {col} ({header[col - 1]!r}): cannot parse {cell!r}"
                ) from None
        rows.append(values)
    if not rows:
        raise InputError("E_MALFORMED", f"{source}: no data rows")
    matrix = RankMatrix(tuple(labels), np.array(rows), orientation, tuple(header[1:]))
    try:
        return validate(matrix)
    except RankMatrixError as err:
        raise InputError(err.code, f"{source}: {err}") from err


def parse_input(path: str | Path, orientation: Orientation = Orientation.LOWER_IS_BETTER) -> RankMatrix:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise InputError("E_IO", f"cannot read {path}: {err}") from err
    return parse_rank_table(text, orientation, str(path))


def load_nfl() -> RankMatrix:
    """Week-12 2014 quarterback rankings by 13 experts (1 = best; 7 cells missing)."""
    text = resources.files("pdrank").joinpath("data/nfl_qb_2014_week12.csv").read_text(encoding="utf-8")
    return parse_rank_table(text, Orientation.LOWER_IS_BETTER, "nfl_qb_2014_week12.csv")


# -- results documents -------------------------------------------------------


@dataclass(frozen=True)
class ResultRecord:
    entity: str
    criterion: str
    mode: str
    level: float | None
    score: float
    variance: float | None
    point_rank: int
    ci_lower: int | None
    ci_upper: int | None


def point_records(entities: Sequence[str], scores: ScoreVector) -> list[ResultRecord]:
    ranks = scores_to_ranks(scores).display
    return [
        ResultRecord(e, scores.criterion.value, "point", None, float(s), None, int(r), None, None)
        for e, s, r in zip(entities, scores.scores, ranks)
    ]


def ci_records(report: RankCIReport) -> list[ResultRecord]:
    out = []
    for iv in report.intervals:
        i = iv.entity
        out.append(
            ResultRecord(
                report.entities[i],
                report.criterion.value,
                report.mode.value,
                report.level,
                float(report.scores.scores[i]),
                float(report.variances[i]),
                int(report.ranks.display[i]),
                iv.lower,
                iv.upper,
            )
        )
    return out


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def write_results_csv(records: Iterable[ResultRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULTS_HEADER)
    for r in records:
        writer.writerow([_fmt(getattr(r, name)) for name in RESULTS_HEADER])
    return buf.getvalue()


def read_results_csv(text: str) -> list[ResultRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != RESULTS_HEADER:
        raise InputError("E_MALFORMED", f"unexpected results header {reader.fieldnames}")

    def opt(cast, v):
        return None if v == "" else cast(v)

    return [
        ResultRecord(
            row["entity"],
            row["criterion"],
            row["mode"],
            opt(float, row["level"]),
            float(row["score"]),
            opt(float, row["variance"]),
            int(row["point_rank"]),
            opt(int, row["ci_lower"]),
            opt(int, row["ci_upper"]),
        )
        for row in reader
    ]


def write_results_json(records: Iterable[ResultRecord], **meta) -> str:
    """Structured-text form: a JSON object with ``meta`` and ``records`` keys."""

    def clean(rec: ResultRecord) -> dict:
        d = asdict(rec)
        for key in ("level", "score", "variance"):
            if d[key] is not None:
                d[key] = round(d[key], 6)
        return d

    return json.dumps({"meta": meta, "records": [clean(r) for r in records]}, indent=2) + "\n"


def read_results_json(text: str) -> list[ResultRecord]:
    doc = json.loads(text)
    names = {f.name for f in fields(ResultRecord)}
    return [ResultRecord(**{k: v for k, v in rec.items() if k in names}) for rec in doc["records"]]


# -- coverage ----------------------------------------------------------------


def write_coverage_csv(reports: Iterable[CoverageReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COVERAGE_HEADER)
    for r in reports:
        writer.writerow([r.scenario, r.criterion.value, r.mode.value, r.m, r.reps, f"{r.coverage:.6f}", f"{r.mc_stderr:.6f}"])
    return buf.getvalue()


def read_coverage_csv(text: str) -> list[dict]:
    rows = list(csv.DictReader(io.StringIO(text)))
    for row in rows:
        row["m"], row["reps"] = int(row["m"]), int(row["reps"])
        row["coverage"], row["mc_stderr"] = float(row["coverage"]), float(row["mc_stderr"])
    return rows


# -- SSE against ballots -----------------------------------------------------


def _competition_ranks(values: np.ndarray) -> np.ndarray:
    """1 + number of strictly smaller values."""
    return 1 + (values[None, :] < values[:, None]).sum(axis=1)


@dataclass(frozen=True)
class SSEResult:
    total: float
    per_ranker: dict[str, float]


def sse(matrix: RankMatrix, display_ranks: Mapping[str, float] | Sequence[float]) -> SSEResult:
    """Squared rank error of a method's ranks against every ballot.

    For each ballot the method's display ranks are restricted to the entities
    that ballot ranked and re-ranked 1..#observed (tied entries share the
    smallest position). They are compared with the ballot's own ranks
    among its observed entities, with 1 = best.
    """
    if isinstance(display_ranks, Mapping):
        missing = [e for e in matrix.entities if e not in display_ranks]
        if missing:
            raise InputError("E_MISSING_ENTITY", f"method ranks missing entities: {', '.join(missing)}")
        est = np.array([float(display_ranks[e]) for e in matrix.entities])
    else:
        est = np.asarray(display_ranks, dtype=float)
        if est.shape != (matrix.n_entities,):
            raise InputError("E_MISSING_ENTITY", f"expected {matrix.n_entities} ranks, got {est.shape}")
    per: dict[str, float] = {}
    for j, name in enumerate(matrix.rankers):
        obs = matrix.observed[:, j]
        ballot = within_column_ranks(matrix, j)[obs]
        if matrix.higher_is_better:
            ballot = obs.sum() + 1 - ballot
        adjusted = _competition_ranks(est[obs])
        per[name] = float(np.sum((adjusted - ballot) ** 2))
    return SSEResult(float(sum(per.values())), per)


def parse_rank_vector(text: str, source: str = "<ranks>") -> dict[str, float]:
    """Two-column CSV ``entity,rank`` of externally produced display ranks."""
    reader = csv.reader(io.StringIO(text))
    out: dict[str, float] = {}
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if lineno == 1 and row[0].strip().lower() == "entity":
            continue
        if len(row) < 2:
            raise InputError("E_MALFORMED", f"{source}: line {lineno} needs entity and rank")
        try:
            out[row[0].strip()] = float(row[1])
        except ValueError:
            raise InputError("E_MALFORMED", f"{source}: line {lineno}: cannot parse rank {row[1]!r}") from None
    return out
