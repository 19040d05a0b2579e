"""Scoring of externally produced predictions.

Predictions are joined to ground truth on ``task_id``.  Anything that does
not parse as a digit answer of the right width gets zero credit at every
position and is counted as a parse failure; it is never dropped.
"""
from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .errors import ArithError, RecordFormatError, WidthMismatchError
from .generator import Dataset
from .taskspec import TaskSpec, parse_completion

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PredictionRecord:
    task_id: str
    expected: str
    predicted: Optional[str]  # None when the prediction file had no entry


@dataclass(frozen=True)
class ScoreReport:
    n_records: int
    exact_hits: int
    position_hits: tuple[int, ...]
    parse_failures: int

    @property
    def width(self) -> int:
        return len(self.position_hits)

    @property
    def exact_match(self) -> float:
        return self.exact_hits / self.n_records

    @property
    def position_accuracy(self) -> tuple[float, ...]:
        return tuple(h / self.n_records for h in self.position_hits)

    @property
    def parse_failure_rate(self) -> float:
        return self.parse_failures / self.n_records


@dataclass
class ScoreAccumulator:
    """Mergeable running totals; shards can be scored separately and merged."""

    width: int
    n: int = 0
    exact: int = 0
    failures: int = 0
    hits: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.hits:
            self.hits = [0] * self.width

    def add(self, rec: PredictionRecord) -> None:
        if len(rec.expected) != self.width:
            raise WidthMismatchError(f"expected {rec.expected!r} is not {self.width} digits wide")
        self.n += 1
        try:
            if rec.predicted is None:
                raise ArithError("missing prediction")
            got = parse_completion(rec.predicted, self.width)
        except ArithError:
            self.failures += 1
            return
        self.exact += got == rec.expected
        for i, (x, y) in enumerate(zip(got, rec.expected)):
            self.hits[i] += x == y

    def merge(self, other: "ScoreAccumulator") -> "ScoreAccumulator":
        if other.width != self.width:
            raise WidthMismatchError(f"cannot merge widths {self.width} and {other.width}")
        return ScoreAccumulator(
            self.width,
            self.n + other.n,
            self.exact + other.exact,
            self.failures + other.failures,
            [x + y for x, y in zip(self.hits, other.hits)],
        )

    def report(self) -> ScoreReport:
        if not self.n:
            raise ArithError("no predictions to score")
        return ScoreReport(self.n, self.exact, tuple(self.hits), self.failures)


def score(predictions: Iterable[PredictionRecord], spec: TaskSpec | int) -> ScoreReport:
    acc = ScoreAccumulator(spec if isinstance(spec, int) else spec.width)
    for rec in predictions:
        acc.add(rec)
    return acc.report()


def read_predictions(path) -> dict[str, str]:
    """``{task_id: prediction}`` from a jsonl file of {task_id, prediction} objects."""
    path = Path(path)
    out: dict[str, str] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                tid, pred = obj["task_id"], obj["prediction"]
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise RecordFormatError(path, lineno, f"unreadable prediction ({e})") from None
            if tid in out:
                raise RecordFormatError(path, lineno, f"duplicate task_id {tid}")
            out[tid] = "" if pred is None else str(pred)
    return out


def write_predictions(preds: Mapping[str, str], path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for tid, pred in preds.items():
            fh.write(json.dumps({"task_id": tid, "prediction": pred}, ensure_ascii=False) + "\n")


def join_predictions(dataset: Dataset, predictions: Mapping[str, str]) -> list[PredictionRecord]:
    """One PredictionRecord per dataset record, in dataset order."""
    known = {r.task_id for r in dataset.records}
    stray = sum(1 for tid in predictions if tid not in known)
    if stray:
        log.warning("%d predictions have task ids not in the dataset; ignored", stray)
    return [PredictionRecord(r.task_id, r.c_digits, predictions.get(r.task_id)) for r in dataset.records]


@dataclass(frozen=True)
class AccuracyDelta:
    exact_match: float
    position_accuracy: tuple[float, ...]


def accuracy_delta(before: ScoreReport, after: ScoreReport) -> AccuracyDelta:
    if before.width != after.width:
        raise WidthMismatchError(f"widths differ: {before.width} vs {after.width}")
    return AccuracyDelta(
        after.exact_match - before.exact_match,
        tuple(y - x for x, y in zip(before.position_accuracy, after.position_accuracy)),
    )


def report_text(r: ScoreReport, title: str = "") -> str:
    lines = [title] if title else []
    lines.append(f"records            {r.n_records}")
    lines.append(f"exact match        {r.exact_match:.4f}")
    lines.append(f"parse failure rate {r.parse_failure_rate:.4f}")
    for i, acc in enumerate(r.position_accuracy, 1):
        lines.append(f"  C{i:<3} accuracy     {acc:.4f}")
    return "\n".join(lines)


def report_csv(r: ScoreReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n_records", "exact_match", "parse_failure_rate"] + [f"C{i}" for i in range(1, r.width + 1)])
    w.writerow([r.n_records, repr(r.exact_match), repr(r.parse_failure_rate)] + [repr(x) for x in r.position_accuracy])
    return buf.getvalue()


def ucurve_csv(runs: Mapping[str, ScoreReport]) -> str:
    if not runs:
        raise ArithError("no runs to export")
    widths = {r.width for r in runs.values()}
    if len(widths) != 1:
        raise WidthMismatchError(f"runs have different output widths: {sorted(widths)}")
    width = widths.pop()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["size"] + [f"C{i}" for i in range(1, width + 1)])
    for label, r in runs.items():
        w.writerow([label] + [repr(x) for x in r.position_accuracy])
    return buf.getvalue()


def ucurve_export(runs: Mapping[str, ScoreReport], path) -> None:
    """Training-size x position accuracy matrix, one row per run."""
    Path(path).write_text(ucurve_csv(runs), encoding="utf-8")


def read_ucurve(path) -> dict[str, tuple[float, ...]]:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    return {row[0]: tuple(float(x) for x in row[1:]) for row in rows[1:]}
