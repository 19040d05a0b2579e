"""Subgroups of digit positions and their quality.

A subgroup picks digit positions of operand a (``ia``), operand b (``ib``) and
the output (``ic``), all 1-based from the most significant digit.  Its
quality is the best accuracy any deterministic predictor of the ``ic``
digits can reach when it only sees the ``ia``/``ib`` digits; the
conditional-mode lookup attains it.
"""
from __future__ import annotations

import itertools
import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import ArithError, BudgetError, SpecError
from .generator import sample_pairs
from .stats import DEFAULT_BUDGET, _dtype, _results, entropy
from .taskspec import ExampleRecord, TaskSpec


@dataclass(frozen=True)
class SubgroupSpec:
    ia: tuple[int, ...] = ()
    ib: tuple[int, ...] = ()
    ic: tuple[int, ...] = (1,)

    def __post_init__(self):
        for name in ("ia", "ib", "ic"):
            vals = tuple(sorted(set(getattr(self, name))))
            if any(not isinstance(v, int) or v < 1 for v in vals):
                raise SpecError(f"{name} positions must be integers >= 1, got {vals}")
            object.__setattr__(self, name, vals)
        if not self.ic:
            raise SpecError("a subgroup needs at least one output position")

    def validate(self, spec: TaskSpec) -> None:
        if any(i > spec.n for i in self.ia + self.ib):
            raise ArithError(f"operand position out of range for n={spec.n}: {self}")
        if any(i > spec.width for i in self.ic):
            raise ArithError(f"output position out of range for width {spec.width}: {self}")

    @property
    def n_inputs(self) -> int:
        return len(self.ia) + len(self.ib)

    def refines(self, other: "SubgroupSpec") -> bool:
        """True when self sees a superset of other's inputs for the same outputs."""
        return self.ic == other.ic and set(other.ia) <= set(self.ia) and set(other.ib) <= set(self.ib)

    def __str__(self) -> str:
        fmt = lambda xs: "{" + ",".join(map(str, xs)) + "}"
        return f"A{fmt(self.ia)}B{fmt(self.ib)}C{fmt(self.ic)}"


_SUBGROUP_RE = re.compile(r"(?:A\{([\d,\s]*)\})?(?:B\{([\d,\s]*)\})?C\{([\d,\s]*)\}")


def parse_subgroup(text: str) -> SubgroupSpec:
    """Parse ``A{1,2}B{1}C{3}``; the A and B parts may be omitted or empty."""
    m = _SUBGROUP_RE.fullmatch(text.replace(" ", ""))
    if not m:
        raise SpecError(f"bad subgroup expression {text!r}")

    def ints(group):
        return tuple(int(x) for x in group.split(",") if x) if group else ()

    return SubgroupSpec(ints(m.group(1)), ints(m.group(2)), ints(m.group(3)))


def project(a: int, b: int, c_digits: str, s: SubgroupSpec) -> tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...]]:
    da, db = str(a), str(b)
    for name, idx, digits in (("ia", s.ia, da), ("ib", s.ib, db), ("ic", s.ic, c_digits)):
        if idx and idx[-1] > len(digits):
            raise ArithError(f"{name} position {idx[-1]} out of bounds for {digits!r}")
    return (
        tuple(da[i - 1] for i in s.ia),
        tuple(db[i - 1] for i in s.ib),
        tuple(c_digits[i - 1] for i in s.ic),
    )


# -- vectorized counting -----------------------------------------------------


def _digit(x: np.ndarray, pos: int, width: int) -> np.ndarray:
    return (x // 10 ** (width - pos)) % 10


def _key(parts: Iterable[np.ndarray]) -> np.ndarray:
    key = None
    for d in parts:
        key = d if key is None else key * 10 + d
    return key


def _coded_counts(spec: TaskSpec, s: SubgroupSpec, a: np.ndarray, b: np.ndarray):
    """Sorted unique joint keys and counts; joint = in_key * 10**|ic| + out_key."""
    c = _results(spec, a, b)
    w = spec.width
    zero = np.zeros_like(np.broadcast_to(a, c.shape), dtype=np.int64)
    in_parts = [np.broadcast_to(_digit(a, i, spec.n), c.shape) for i in s.ia]
    in_parts += [np.broadcast_to(_digit(b, i, spec.n), c.shape) for i in s.ib]
    in_key = _key(in_parts) if in_parts else zero
    out_key = _key(_digit(c, i, w) for i in s.ic)
    joint = (np.asarray(in_key, dtype=np.int64) * 10 ** len(s.ic) + np.asarray(out_key, dtype=np.int64)).ravel()
    return np.unique(joint, return_counts=True)


def _domain_arrays(spec: TaskSpec, budget: int, sample_size: Optional[int], seed: int):
    dt = _dtype(spec)
    if sample_size is not None:
        pairs = sample_pairs(spec, sample_size, seed).astype(dt)
        return pairs[:, 0], pairs[:, 1]
    if spec.domain_size > budget:
        raise BudgetError(f"{spec} has {spec.domain_size} pairs, over the exact budget of {budget}")
    r = np.arange(spec.lo, spec.hi + 1, dtype=np.int64).astype(dt)
    return r[:, None], r[None, :]


def _table(spec, s, budget, sample_size, seed):
    s.validate(spec)
    a, b = _domain_arrays(spec, budget, sample_size, seed)
    joint, counts = _coded_counts(spec, s, a, b)
    if not len(joint):
        raise ArithError("empty domain")
    return joint, counts


def subgroup_counts(
    spec: TaskSpec, s: SubgroupSpec, *, budget: int = DEFAULT_BUDGET
) -> dict[tuple[tuple[str, ...], tuple[str, ...]], Counter]:
    """Joint counts of projected (a', b') -> {c': count} over the full domain."""
    joint, counts = _table(spec, s, budget, None, 0)
    k_in, k_out = s.n_inputs, len(s.ic)
    table: dict = defaultdict(Counter)
    for key, cnt in zip(joint.tolist(), counts.tolist()):
        in_key, out_key = divmod(key, 10**k_out)
        ins = str(in_key).zfill(k_in) if k_in else ""
        table[(tuple(ins[: len(s.ia)]), tuple(ins[len(s.ia) :]))][tuple(str(out_key).zfill(k_out))] += cnt
    return dict(table)


@dataclass(frozen=True)
class QualityReport:
    subgroup: SubgroupSpec
    domain_cardinality: int
    label_cardinality: int
    label_entropy: float
    quality: float
    mode: str = "exact"
    sample_size: Optional[int] = None
    seed: Optional[int] = None


def quality(
    spec: TaskSpec,
    s: SubgroupSpec,
    *,
    budget: int = DEFAULT_BUDGET,
    sample_size: Optional[int] = None,
    seed: int = 0,
) -> QualityReport:
    """Q(s): summed per-cell modal counts over the total count."""
    joint, counts = _table(spec, s, budget, sample_size, seed)
    scale = 10 ** len(s.ic)
    in_key, out_key = joint // scale, joint % scale
    starts = np.flatnonzero(np.r_[True, in_key[1:] != in_key[:-1]])
    best = np.maximum.reduceat(counts, starts)
    labels = np.unique(out_key)
    label_counts = np.bincount(np.searchsorted(labels, out_key), weights=counts).astype(np.int64)
    total = int(counts.sum())
    return QualityReport(
        subgroup=s,
        domain_cardinality=len(starts),
        label_cardinality=len(labels),
        label_entropy=entropy(label_counts.tolist()),
        quality=int(best.sum()) / total,
        mode="exact" if sample_size is None else "sampled",
        sample_size=sample_size,
        seed=None if sample_size is None else seed,
    )


# -- argmax oracle -----------------------------------------------------------


@dataclass(frozen=True)
class OracleModel:
    subgroup: SubgroupSpec
    table: dict
    fallback: tuple[str, ...]

    def predict(self, a: int, b: int, c_digits: str) -> tuple[str, ...]:
        ka, kb, _ = project(a, b, c_digits, self.subgroup)
        return self.table.get((ka, kb), self.fallback)


def _mode(counter: Counter) -> tuple[str, ...]:
    # digit tuples of equal length order like the numbers they spell
    return min(counter, key=lambda label: (-counter[label], label))


def oracle_fit(train: Iterable[ExampleRecord], s: SubgroupSpec) -> OracleModel:
    cells: dict = defaultdict(Counter)
    marginal: Counter = Counter()
    for r in train:
        ka, kb, kc = project(r.a, r.b, r.c_digits, s)
        cells[(ka, kb)][kc] += 1
        marginal[kc] += 1
    if not marginal:
        raise ArithError("cannot fit an oracle on an empty training set")
    return OracleModel(s, {k: _mode(v) for k, v in cells.items()}, _mode(marginal))


def oracle_eval(model: OracleModel, test: Iterable[ExampleRecord]) -> float:
    hits = total = 0
    for r in test:
        total += 1
        hits += model.predict(r.a, r.b, r.c_digits) == project(r.a, r.b, r.c_digits, model.subgroup)[2]
    if not total:
        raise ArithError("cannot evaluate on an empty test set")
    return hits / total


# -- enumeration and difficulty ---------------------------------------------


def enumerate_subgroups(spec: TaskSpec, max_input_positions: int, ic_size: int) -> list[SubgroupSpec]:
    """All subgroups with |ia|+|ib| <= max_input_positions and 1 <= |ic| <= ic_size."""
    if max_input_positions < 0 or ic_size < 0:
        raise ArithError("caps must be nonnegative")
    slots = [("a", i) for i in range(1, spec.n + 1)] + [("b", i) for i in range(1, spec.n + 1)]
    outs = range(1, spec.width + 1)
    found = []
    for k in range(min(max_input_positions, len(slots)) + 1):
        for combo in itertools.combinations(slots, k):
            ia = tuple(i for side, i in combo if side == "a")
            ib = tuple(i for side, i in combo if side == "b")
            for j in range(1, min(ic_size, spec.width) + 1):
                for ic in itertools.combinations(outs, j):
                    found.append(SubgroupSpec(ia, ib, ic))
    return found


@dataclass(frozen=True)
class DifficultyEstimate:
    geometric_mean: float  # per-prediction difficulty
    zeta_proxy: float  # geometric_mean ** m, i.e. the product
    m: int


def difficulty_estimate(h_values: Sequence[float], m: Optional[int] = None) -> DifficultyEstimate:
    h = list(h_values)
    m = len(h) if m is None else m
    if m != len(h) or m == 0:
        raise ArithError(f"expected {m} difficulties, got {len(h)}")
    if any(x <= 0 for x in h):
        raise ArithError("difficulties must be positive")
    mean = math.exp(math.fsum(math.log(x) for x in h) / m)
    return DifficultyEstimate(mean, math.prod(h), m)


def entropy_h(spec: TaskSpec, s: SubgroupSpec) -> float:
    return quality(spec, s).label_entropy


def difficulty_for_subgroups(
    spec: TaskSpec,
    subgroups: Sequence[SubgroupSpec],
    h: Callable[[TaskSpec, SubgroupSpec], float] = entropy_h,
) -> DifficultyEstimate:
    """Difficulty aggregate with one subgroup per prediction (label entropy by default)."""
    return difficulty_estimate([h(spec, s) for s in subgroups])


def position_quality_profile(spec: TaskSpec, max_input_positions: int, budget: int = DEFAULT_BUDGET) -> list[QualityReport]:
    """For each output position, the best single-position subgroup within the input cap."""
    best = []
    for pos in range(1, spec.width + 1):
        reports = [
            quality(spec, s, budget=budget)
            for s in enumerate_subgroups(spec, max_input_positions, 1)
            if s.ic == (pos,)
        ]
        best.append(max(reports, key=lambda r: (r.quality, -r.subgroup.n_inputs)))
    return best
