"""Exact label-space statistics.

Counting is done on integer label tables; floats only appear when an
entropy is taken, once, from the final counts.
"""
from __future__ import annotations

import math
from collections.abc import Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Optional, Sequence

import numpy as np

from .errors import ArithError, BudgetError
from .generator import sample_pairs
from .taskspec import TaskSpec

DEFAULT_BUDGET = 10**8
CHUNK_PAIRS = 2_000_000


def entropy(hist) -> float:
    """Shannon entropy in bits of a frequency table (mapping or sequence of counts)."""
    counts = list(hist.values()) if isinstance(hist, Mapping) else list(hist)
    if not counts:
        raise ArithError("entropy of an empty table")
    if any(c < 0 for c in counts):
        raise ArithError("negative count in frequency table")
    total = sum(counts)
    if total <= 0:
        raise ArithError("frequency table has no mass")
    if all(float(c).is_integer() for c in counts):
        # H = log2 N - (1/N) sum c log2 c, with c, N exact integers
        ints = [int(c) for c in counts if c]
        total = sum(ints)
        return max(0.0, math.log2(total) - math.fsum(c * math.log2(c) for c in ints) / total)
    return max(0.0, -math.fsum((c / total) * math.log2(c / total) for c in counts if c))


def round4(x: float) -> float:
    """Half-even rounding to 4 decimals on the decimal representation."""
    return float(Decimal(repr(x)).quantize(Decimal("0.0001"), rounding=ROUND_HALF_EVEN))


def _results(spec: TaskSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    base = a + b if spec.operator.value == "add" else a * b
    rule = spec.rule
    if rule.kind == "translate":
        return base + rule.value
    if rule.kind == "scale":
        return base * rule.value
    if rule.kind == "mod":
        return base % rule.value
    return base


def _dtype(spec: TaskSpec):
    top = spec.rule.apply(spec.operator.base(spec.hi, spec.hi))
    return np.int64 if top < 2**62 else object


def merge_counts(parts: Sequence[tuple[np.ndarray, np.ndarray]]) -> tuple[np.ndarray, np.ndarray]:
    """Merge partial (values, counts) tables; order of parts is irrelevant."""
    parts = [p for p in parts if len(p[0])]
    if not parts:
        return np.array([], dtype=np.int64), np.array([], dtype=np.int64)
    if len(parts) == 1:
        return parts[0]
    vals = np.concatenate([p[0] for p in parts])
    cnts = np.concatenate([p[1] for p in parts])
    uniq, inv = np.unique(vals, return_inverse=True)
    merged = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(merged, inv, cnts)
    return uniq, merged


def _count_a_range(spec: TaskSpec, a_lo: int, a_hi: int) -> tuple[np.ndarray, np.ndarray]:
    dt = _dtype(spec)
    b = np.arange(spec.lo, spec.hi + 1, dtype=np.int64).astype(dt)
    a = np.arange(a_lo, a_hi, dtype=np.int64).astype(dt)
    vals = _results(spec, a[:, None], b[None, :]).ravel()
    uniq, cnts = np.unique(vals, return_counts=True)
    return uniq, cnts.astype(np.int64)


def _a_chunks(spec: TaskSpec) -> list[tuple[int, int]]:
    rows = max(1, CHUNK_PAIRS // spec.span)
    return [(lo, min(lo + rows, spec.hi + 1)) for lo in range(spec.lo, spec.hi + 1, rows)]


def _count_chunk(args):
    spec, lo, hi = args
    return _count_a_range(spec, lo, hi)


def exact_label_counts(spec: TaskSpec, budget: int = DEFAULT_BUDGET, workers: int = 1):
    """Sorted distinct results and their multiplicities over the whole domain."""
    if spec.domain_size > budget:
        raise BudgetError(
            f"{spec} has {spec.domain_size} operand pairs, over the exact budget of {budget}; "
            "use sampled mode or raise the budget"
        )
    chunks = _a_chunks(spec)
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_count_chunk, [(spec, lo, hi) for lo, hi in chunks]))
    else:
        parts = [_count_a_range(spec, lo, hi) for lo, hi in chunks]
    return merge_counts(parts)


def sampled_label_counts(spec: TaskSpec, size: int, seed: int):
    pairs = sample_pairs(spec, size, seed).astype(_dtype(spec))
    vals = _results(spec, pairs[:, 0], pairs[:, 1])
    uniq, cnts = np.unique(vals, return_counts=True)
    return uniq, cnts.astype(np.int64)


def positional_counts(values: np.ndarray, counts: np.ndarray, width: int) -> list[dict[int, int]]:
    """Per-position digit histograms (position 1 is the most significant)."""
    out = []
    for i in range(width):
        digit = (values // 10 ** (width - 1 - i)) % 10
        hist = {}
        for d in range(10):
            c = int(counts[digit == d].sum())
            if c:
                hist[d] = c
        out.append(hist)
    return out


@dataclass(frozen=True)
class LabelSpaceStats:
    spec: str
    per_position_entropy: tuple[float, ...]
    joint_cardinality: int
    joint_entropy: float
    domain_cardinality: int
    positional: tuple[dict, ...] = ()
    mode: str = "exact"
    sample_size: Optional[int] = None
    seed: Optional[int] = None

    def rounded(self) -> "LabelSpaceStats":
        return replace(
            self,
            per_position_entropy=tuple(round4(h) for h in self.per_position_entropy),
            joint_entropy=round4(self.joint_entropy),
        )


def label_space_stats(
    spec: TaskSpec,
    *,
    budget: int = DEFAULT_BUDGET,
    sample_size: Optional[int] = None,
    seed: int = 0,
    workers: int = 1,
) -> LabelSpaceStats:
    """Positional and joint label statistics for a task.

    Exact over the full operand domain unless ``sample_size`` is given, in
    which case a uniform sample without replacement of that many pairs is
    used (``seed`` fixes it).  Exact mode refuses domains above ``budget``.
    """
    if sample_size is None:
        values, counts = exact_label_counts(spec, budget, workers)
        mode, seed_used = "exact", None
    else:
        values, counts = sampled_label_counts(spec, sample_size, seed)
        mode, seed_used = "sampled", seed
    positional = positional_counts(values, counts, spec.width)
    return LabelSpaceStats(
        spec=spec.canonical(),
        per_position_entropy=tuple(entropy(h) for h in positional),
        joint_cardinality=len(values),
        joint_entropy=entropy(counts.tolist()),
        domain_cardinality=spec.domain_size,
        positional=tuple(positional),
        mode=mode,
        sample_size=sample_size,
        seed=seed_used,
    )


def positional_distribution(spec: TaskSpec, i: int, budget: int = DEFAULT_BUDGET) -> dict[int, int]:
    """Exact digit counts at output position ``i`` (1-based, most significant first)."""
    if not 1 <= i <= spec.width:
        raise ArithError(f"position {i} outside 1..{spec.width}")
    values, counts = exact_label_counts(spec, budget)
    return positional_counts(values, counts, spec.width)[i - 1]
