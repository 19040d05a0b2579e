"""Partial-product diagnostic sets for two-operand multiplication.

Each constructor turns one source pair (a, b) into a list of atomic sub-task
records plus a reconstruction: an ordered list of terms whose sum is a*b.
Items are rendered in the plain digit-spaced format with completions padded
to the source task's output width, so they can be written and scored with
the same tooling as the source dataset.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .errors import ArithError, DomainError
from .generator import Dataset, Provenance
from .taskspec import ExampleRecord, Format, Operator, TaskSpec, render_prompt, spaced

DEFAULT_CHAIN_CAP = 100
TWO_DIGIT = TaskSpec(Operator.MUL, 2)


class Method(str, Enum):
    STANDARD = "standard"
    REPETITIVE = "repetitive"
    LATTICE = "lattice"
    EGYPTIAN = "egyptian"


@dataclass(frozen=True)
class Reconstruction:
    terms: tuple[tuple[str, int], ...]  # (label, value), summed in order

    def evaluate(self) -> int:
        return sum(v for _, v in self.terms)

    def describe(self) -> str:
        return " + ".join(str(v) for _, v in self.terms) + f" = {self.evaluate()}"


@dataclass(frozen=True)
class DiagnosticSet:
    method: Method
    source: tuple[int, int]
    items: tuple[ExampleRecord, ...]
    reconstruction: Reconstruction

    def item_values(self) -> list[int]:
        return [int(r.c_digits) for r in self.items]


def _item(method: Method, source, index: int, x: int, y: int, op: Operator, width: int) -> ExampleRecord:
    value = op.base(x, y)
    digits = str(value).zfill(width)
    if len(digits) > width:
        raise ArithError(f"item {x} {op.symbol} {y} = {value} exceeds width {width}")
    key = f"diag:{method.value}:{source[0]}:{source[1]}:{index}".encode()
    return ExampleRecord(
        a=x,
        b=y,
        c_digits=digits,
        prompt=render_prompt(x, y, op, Format.PLAIN),
        completion=spaced(digits),
        task_id=hashlib.sha1(key).hexdigest()[:16],
    )


def _check(a: int, b: int, spec: Optional[TaskSpec]) -> int:
    """Validate operands and return the item width."""
    if spec is None:
        if a < 1 or b < 1:
            raise DomainError(f"operands must be positive, got ({a}, {b})")
        return len(str(a * b))
    if not (spec.lo <= a <= spec.hi and spec.lo <= b <= spec.hi):
        raise DomainError(f"({a}, {b}) outside the {spec.n}-digit operand domain")
    return spec.width


def _digits2(a: int, b: int):
    _check(a, b, TWO_DIGIT)
    return divmod(a, 10), divmod(b, 10)


def standard_set(a: int, b: int, width: int = 4) -> DiagnosticSet:
    (a1, a2), (b1, b2) = _digits2(a, b)
    m = Method.STANDARD
    pairs = [(a1, b), (a2, b), (b1, a), (b2, a)]
    items = tuple(_item(m, (a, b), i, x, y, Operator.MUL, width) for i, (x, y) in enumerate(pairs))
    recon = Reconstruction(
        (("100*A1*B1", 100 * a1 * b1), ("10*A1*B2", 10 * a1 * b2), ("10*A2*B1", 10 * a2 * b1), ("A2*B2", a2 * b2))
    )
    return DiagnosticSet(m, (a, b), items, recon)


def lattice_set(a: int, b: int, width: int = 4) -> DiagnosticSet:
    (a1, a2), (b1, b2) = _digits2(a, b)
    m = Method.LATTICE
    cells = [(10 * a1, 10 * b1), (10 * a1, b2), (a2, 10 * b1), (a2, b2)]
    items = tuple(_item(m, (a, b), i, x, y, Operator.MUL, width) for i, (x, y) in enumerate(cells))
    recon = Reconstruction(tuple((f"{x}*{y}", x * y) for x, y in cells))
    return DiagnosticSet(m, (a, b), items, recon)


def repetitive_set(
    a: int,
    b: int,
    *,
    spec: Optional[TaskSpec] = TWO_DIGIT,
    chain_cap: int = DEFAULT_CHAIN_CAP,
    mirror: bool = False,
) -> DiagnosticSet:
    """Running-sum chain a, 2a, ..., b*a as b-1 addition items.

    With ``mirror`` the chain adding b to itself a times is appended.
    ``spec=None`` accepts any positive operands.
    """
    width = _check(a, b, spec)
    chains = [(a, b)] + ([(b, a)] if mirror else [])
    for _, times in chains:
        if times > chain_cap:
            raise ArithError(f"chain of {times} terms exceeds the cap of {chain_cap}")
    m = Method.REPETITIVE
    items = []
    for addend, times in chains:
        acc = addend
        for _ in range(times - 1):
            items.append(_item(m, (a, b), len(items), acc, addend, Operator.ADD, width))
            acc += addend
    recon = Reconstruction(tuple((f"term{k}", a) for k in range(1, b + 1)))
    return DiagnosticSet(m, (a, b), tuple(items), recon)


def binary_decompose(b: int) -> tuple[int, ...]:
    """Exponents k with bit k set in b, ascending."""
    if b < 1:
        raise ArithError(f"binary decomposition needs b >= 1, got {b}")
    return tuple(k for k in range(b.bit_length()) if b >> k & 1)


def egyptian_set(a: int, b: int, *, spec: Optional[TaskSpec] = TWO_DIGIT) -> DiagnosticSet:
    """All doublings 2**k * a for k <= floor(log2 b); the reconstruction keeps
    the ones picked out by b's binary digits."""
    width = _check(a, b, spec)
    m = Method.EGYPTIAN
    top = b.bit_length() - 1
    items = tuple(_item(m, (a, b), k, 2**k, a, Operator.MUL, width) for k in range(top + 1))
    recon = Reconstruction(tuple((f"2^{k}*{a}", a << k) for k in binary_decompose(b)))
    return DiagnosticSet(m, (a, b), items, recon)


def build(method: Method | str, a: int, b: int, *, spec: TaskSpec = TWO_DIGIT, chain_cap: int = DEFAULT_CHAIN_CAP, mirror: bool = False) -> DiagnosticSet:
    method = Method(method)
    if method in (Method.STANDARD, Method.LATTICE):
        if spec.n != 2 or spec.operator is not Operator.MUL:
            raise ArithError(f"{method.value} diagnostics are defined for 2-digit multiplication only")
        return (standard_set if method is Method.STANDARD else lattice_set)(a, b, spec.width)
    if method is Method.REPETITIVE:
        return repetitive_set(a, b, spec=spec, chain_cap=chain_cap, mirror=mirror)
    return egyptian_set(a, b, spec=spec)


def diagnostic_dataset(sets: Iterable[DiagnosticSet], spec: TaskSpec = TWO_DIGIT) -> Dataset:
    sets = list(sets)
    methods = {s.method.value for s in sets}
    kind = f"diagnostic:{methods.pop()}" if len(methods) == 1 else "diagnostic:mixed"
    records = [r for s in sets for r in s.items]
    return Dataset(spec.with_(format=Format.PLAIN), records, Provenance(kind, len(records)))


AUDIT_HEADER = "method,a,b,terms,total,product,ok"


def audit_rows(sets: Iterable[DiagnosticSet]) -> list[str]:
    rows = [AUDIT_HEADER]
    for s in sets:
        a, b = s.source
        total = s.reconstruction.evaluate()
        terms = "+".join(str(v) for _, v in s.reconstruction.terms)
        rows.append(f"{s.method.value},{a},{b},{terms},{total},{a * b},{int(total == a * b)}")
    return rows
