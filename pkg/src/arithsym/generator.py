"""Dataset materialization: enumeration, sampling, splitting and jsonl I/O."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional

import numpy as np

from .errors import ArithError, CapacityError, RecordFormatError, SpecError
from .taskspec import ExampleRecord, TaskSpec, parse_completion, parse_spec, render_example, spaced


@dataclass(frozen=True)
class Provenance:
    kind: str  # exhaustive | sampled | split:<part> | diagnostic:<method>
    size: Optional[int] = None
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "size": self.size, "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "Provenance":
        return cls(d["kind"], d.get("size"), d.get("seed"))


@dataclass
class Dataset:
    spec: TaskSpec
    records: list[ExampleRecord]
    provenance: Provenance = field(default_factory=lambda: Provenance("exhaustive"))

    def __post_init__(self):
        ids = {r.task_id for r in self.records}
        if len(ids) != len(self.records):
            raise ArithError("dataset contains duplicate task ids")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def pairs(self) -> list[tuple[int, int]]:
        return [(r.a, r.b) for r in self.records]


@dataclass(frozen=True)
class SplitRatios:
    train: float = 0.8
    val: float = 0.1
    test: float = 0.1

    def __post_init__(self):
        if min(self.train, self.val, self.test) <= 0:
            raise ArithError("split fractions must be positive")
        if abs(self.train + self.val + self.test - 1.0) > 1e-9:
            raise ArithError("split fractions must sum to 1")


def enumerate_domain(spec: TaskSpec, a_range: Optional[tuple[int, int]] = None) -> Iterator[tuple[int, int]]:
    """Every operand pair in lexicographic order.

    ``a_range`` restricts the first operand to a half-open sub-range so
    disjoint ranges can be consumed by separate workers.
    """
    a_lo, a_hi = a_range if a_range else (spec.lo, spec.hi + 1)
    for a in range(max(a_lo, spec.lo), min(a_hi, spec.hi + 1)):
        for b in range(spec.lo, spec.hi + 1):
            yield a, b


def full_dataset(spec: TaskSpec) -> Dataset:
    records = [render_example(a, b, spec) for a, b in enumerate_domain(spec)]
    return Dataset(spec, records, Provenance("exhaustive", len(records)))


def sample_pairs(spec: TaskSpec, size: int, seed: int) -> np.ndarray:
    """(size, 2) array of distinct operand pairs, sorted lexicographically."""
    if size > spec.domain_size:
        raise CapacityError(f"cannot draw {size} distinct pairs from a domain of {spec.domain_size}")
    if size < 0:
        raise CapacityError("size must be nonnegative")
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(spec.domain_size, size=size, replace=False))
    return np.stack([spec.lo + idx // spec.span, spec.lo + idx % spec.span], axis=1)


def sample_dataset(spec: TaskSpec, size: int, seed: int) -> Dataset:
    """Uniform sample without replacement; deterministic in (spec, size, seed)."""
    pairs = sample_pairs(spec, size, seed)
    records = [render_example(int(a), int(b), spec) for a, b in pairs]
    return Dataset(spec, records, Provenance("sampled", size, seed))


def split_sizes(total: int, ratios: SplitRatios) -> tuple[int, int, int]:
    # tiny slack so that e.g. 8100 * 0.1 floors to 810, not 809
    n_val = math.floor(total * ratios.val + 1e-9)
    n_test = math.floor(total * ratios.test + 1e-9)
    return total - n_val - n_test, n_val, n_test


def split_dataset(d: Dataset, ratios: SplitRatios = SplitRatios(), seed: int = 0) -> tuple[Dataset, Dataset, Dataset]:
    if len(d) == 0:
        raise ArithError("cannot split an empty dataset")
    if len(d) < 10:
        raise ArithError(f"need at least 10 records to split, got {len(d)}")
    n_train, n_val, _ = split_sizes(len(d), ratios)
    order = np.random.default_rng(seed).permutation(len(d))
    cuts = (order[:n_train], order[n_train : n_train + n_val], order[n_train + n_val :])
    parts = []
    for name, idx in zip(("train", "val", "test"), cuts):
        records = [d.records[i] for i in sorted(idx.tolist())]
        parts.append(Dataset(d.spec, records, Provenance(f"split:{name}", len(records), seed)))
    return tuple(parts)


def meta_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


def record_to_line(r: ExampleRecord) -> str:
    obj = {"task_id": r.task_id, "a": r.a, "b": r.b, "prompt": r.prompt, "completion": r.completion}
    return json.dumps(obj, ensure_ascii=False)


def write_records(d: Dataset, path, *, meta: bool = True) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for r in d.records:
            fh.write(record_to_line(r) + "\n")
    if meta:
        info = {"spec": d.spec.canonical(), "seed": d.spec.seed, "provenance": d.provenance.to_dict()}
        meta_path(path).write_text(json.dumps(info, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_records(path, spec: Optional[TaskSpec] = None) -> Dataset:
    """Inverse of ``write_records``.

    The spec comes from the sidecar unless given explicitly.  Any malformed
    line raises ``RecordFormatError`` carrying the 1-based line number.
    """
    path = Path(path)
    provenance = Provenance("unknown")
    side = meta_path(path)
    if side.exists():
        info = json.loads(side.read_text(encoding="utf-8"))
        if spec is None:
            spec = parse_spec(info["spec"], seed=info.get("seed", 0))
        provenance = Provenance.from_dict(info["provenance"])
    if spec is None:
        raise SpecError(f"no spec given and no sidecar at {side}")
    records = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                a, b = obj["a"], obj["b"]
                prompt, completion, tid = obj["prompt"], obj["completion"], obj["task_id"]
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise RecordFormatError(path, lineno, f"unreadable record ({e})") from None
            if not (isinstance(a, int) and isinstance(b, int)):
                raise RecordFormatError(path, lineno, "operands must be integers")
            try:
                digits = parse_completion(completion, spec)
            except ArithError as e:
                raise RecordFormatError(path, lineno, str(e)) from None
            if spaced(digits) != completion:
                raise RecordFormatError(path, lineno, f"completion {completion!r} is not in canonical form")
            records.append(ExampleRecord(a, b, digits, prompt, completion, tid))
    try:
        return Dataset(spec, records, provenance)
    except ArithError as e:
        raise RecordFormatError(path, 0, str(e)) from None

