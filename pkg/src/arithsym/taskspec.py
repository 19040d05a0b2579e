"""Arithmetic task definitions, ground truth under rule perturbations, and the
digit-spaced text format.

A task is ``f(a, b)`` for n-digit operands drawn from ``[10**(n-1), 10**n - 1]``
with one of four rules applied to the base result (a+b or a*b): none, a
constant translation, an integer scaling, or a modular reduction.  Outputs
are zero padded to a width that depends only on (operator, n, rule).
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import CompletionParseError, DomainError, SpecError, WidthOverflowError


class Operator(str, Enum):
    ADD = "add"
    MUL = "mul"

    @property
    def symbol(self) -> str:
        return "+" if self is Operator.ADD else "×"

    @property
    def word(self) -> str:
        return "add" if self is Operator.ADD else "multiply"

    def base(self, a: int, b: int) -> int:
        return a + b if self is Operator.ADD else a * b


class Format(str, Enum):
    PLAIN = "plain"
    NATURAL_LANGUAGE = "nl"
    RANDOM_STRING = "rs"
    DISTURBED_DIGITS = "dd"


# {a}/{b} are spaced operand digits; {op} and {word} only appear where the
# template names the operator.  RS and DD templates are operator-blind.
TEMPLATES = {
    Format.PLAIN: "{a} {op} {b} =",
    Format.NATURAL_LANGUAGE: "What is {a} {word} {b}? Answer:",
    Format.RANDOM_STRING: "fafr if {a} hfk {b}? Ffhjar:",
    Format.DISTURBED_DIGITS: "3.123 34 {a} 461 {b}? 952414:",
}


@dataclass(frozen=True)
class Rule:
    kind: str = "none"  # none | translate | scale | mod
    value: int = 0

    def __post_init__(self):
        if self.kind == "none":
            if self.value != 0:
                raise SpecError("rule 'none' takes no value")
        elif self.kind == "translate":
            if self.value < 0:
                raise SpecError(f"translation must be nonnegative, got {self.value}")
        elif self.kind in ("scale", "mod"):
            if self.value < 2:
                raise SpecError(f"{self.kind} needs a value >= 2, got {self.value}")
        else:
            raise SpecError(f"unknown rule kind {self.kind!r}")

    @classmethod
    def none(cls) -> "Rule":
        return cls()

    @classmethod
    def translate(cls, delta: int) -> "Rule":
        return cls("translate", delta)

    @classmethod
    def scale(cls, factor: int) -> "Rule":
        return cls("scale", factor)

    @classmethod
    def mod(cls, m: int) -> "Rule":
        return cls("mod", m)

    def apply(self, base: int) -> int:
        if self.kind == "translate":
            return base + self.value
        if self.kind == "scale":
            return base * self.value
        if self.kind == "mod":
            return base % self.value
        return base

    @property
    def token(self) -> str:
        prefix = {"none": "none", "translate": "plus", "scale": "times", "mod": "mod"}[self.kind]
        return prefix if self.kind == "none" else f"{prefix}{self.value}"

    @classmethod
    def from_token(cls, token: str) -> "Rule":
        if token == "none":
            return cls()
        m = re.fullmatch(r"(plus|times|mod)(\d+)", token)
        if not m:
            raise SpecError(f"bad rule token {token!r} (expected none, plusK, timesK or modK)")
        kind = {"plus": "translate", "times": "scale", "mod": "mod"}[m.group(1)]
        return cls(kind, int(m.group(2)))


@dataclass(frozen=True)
class TaskSpec:
    operator: Operator
    n: int
    rule: Rule = field(default_factory=Rule)
    format: Format = Format.PLAIN
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "operator", Operator(self.operator))
        object.__setattr__(self, "format", Format(self.format))
        if not isinstance(self.n, int) or self.n < 1:
            raise SpecError(f"operand width must be an integer >= 1, got {self.n!r}")
        if not 0 <= self.seed < 2**64:
            raise SpecError("seed must fit in 64 unsigned bits")

    @property
    def lo(self) -> int:
        return 10 ** (self.n - 1)

    @property
    def hi(self) -> int:
        return 10**self.n - 1

    @property
    def span(self) -> int:
        return self.hi - self.lo + 1

    @property
    def domain_size(self) -> int:
        return self.span**2

    @property
    def width(self) -> int:
        return output_width(self)

    def canonical(self) -> str:
        """Seed-free identity string, e.g. ``add:n=2:rule=mod50:fmt=plain``."""
        return f"{self.operator.value}:n={self.n}:rule={self.rule.token}:fmt={self.format.value}"

    def with_(self, **changes) -> "TaskSpec":
        fields = dict(operator=self.operator, n=self.n, rule=self.rule, format=self.format, seed=self.seed)
        fields.update(changes)
        return TaskSpec(**fields)

    def __str__(self) -> str:
        return self.canonical()


def parse_spec(text: str, seed: int = 0) -> TaskSpec:
    """Parse ``op:n=N[:rule=R][:fmt=F]``; missing rule/fmt default to none/plain."""
    parts = text.strip().split(":")
    try:
        op = Operator(parts[0])
    except ValueError:
        raise SpecError(f"unknown operator {parts[0]!r} in {text!r}") from None
    kv = {}
    for part in parts[1:]:
        key, sep, value = part.partition("=")
        if not sep or key in kv:
            raise SpecError(f"bad field {part!r} in {text!r}")
        kv[key] = value
    unknown = set(kv) - {"n", "rule", "fmt"}
    if unknown:
        raise SpecError(f"unknown fields {sorted(unknown)} in {text!r}")
    if "n" not in kv or not kv["n"].isdigit():
        raise SpecError(f"missing or non-integer n in {text!r}")
    try:
        fmt = Format(kv.get("fmt", "plain"))
    except ValueError:
        raise SpecError(f"unknown format {kv['fmt']!r}") from None
    return TaskSpec(op, int(kv["n"]), Rule.from_token(kv.get("rule", "none")), fmt, seed)


def output_width(spec: TaskSpec) -> int:
    if spec.rule.kind == "mod":
        return len(str(spec.rule.value - 1))
    # base results and all non-mod rules are monotone in both operands
    return len(str(spec.rule.apply(spec.operator.base(spec.hi, spec.hi))))


def check_operands(a: int, b: int, spec: TaskSpec) -> None:
    for name, v in (("a", a), ("b", b)):
        if not spec.lo <= v <= spec.hi:
            raise DomainError(f"{name}={v} outside [{spec.lo}, {spec.hi}] for {spec}")


def apply_operator(a: int, b: int, spec: TaskSpec) -> int:
    check_operands(a, b, spec)
    return spec.rule.apply(spec.operator.base(a, b))


def spaced(digits: str) -> str:
    return " ".join(digits)


def render_prompt(a: int, b: int, operator: Operator, fmt: Format) -> str:
    """Prompt text for arbitrary nonnegative operands (no domain check)."""
    return TEMPLATES[Format(fmt)].format(
        a=spaced(str(a)), b=spaced(str(b)), op=operator.symbol, word=operator.word
    )


def task_id(spec: TaskSpec, a: int, b: int) -> str:
    key = f"{spec.canonical()}|{a}|{b}".encode()
    return hashlib.sha1(key).hexdigest()[:16]


@dataclass(frozen=True)
class ExampleRecord:
    a: int
    b: int
    c_digits: str
    prompt: str
    completion: str
    task_id: str

    @property
    def text(self) -> str:
        return f"{self.prompt} {self.completion}"


def render_example(a: int, b: int, spec: TaskSpec) -> ExampleRecord:
    c_digits = str(apply_operator(a, b, spec)).zfill(spec.width)
    return ExampleRecord(
        a=a,
        b=b,
        c_digits=c_digits,
        prompt=render_prompt(a, b, spec.operator, spec.format),
        completion=spaced(c_digits),
        task_id=task_id(spec, a, b),
    )


_OPERAND = r"(\d(?: \d)*)"


def _prompt_pattern(operator: Operator, fmt: Format) -> re.Pattern:
    template = TEMPLATES[Format(fmt)]
    pieces = re.split(r"(\{a\}|\{b\})", template)
    out = []
    for piece in pieces:
        if piece in ("{a}", "{b}"):
            out.append(_OPERAND)
        else:
            out.append(re.escape(piece.format(op=operator.symbol, word=operator.word)))
    return re.compile("".join(out))


def parse_prompt(prompt: str, operator: Operator, fmt: Format) -> tuple[int, int]:
    """Recover (a, b) from a rendered prompt."""
    m = _prompt_pattern(Operator(operator), Format(fmt)).fullmatch(prompt)
    if not m:
        raise CompletionParseError(f"prompt does not match the {Format(fmt).value} template: {prompt!r}")
    return int(m.group(1).replace(" ", "")), int(m.group(2).replace(" ", ""))


def parse_completion(text: str, spec: TaskSpec | int) -> str:
    """Canonical zero-padded digit string for a completion.

    Whitespace is dropped and short answers are right aligned, so "408" and
    "0 4 0 8" both give "0408" on a width-4 task.  ``spec`` may also be a
    bare width.
    """
    width = spec if isinstance(spec, int) else spec.width
    digits = "".join(text.split())
    if not digits:
        raise CompletionParseError("empty completion")
    if not (digits.isascii() and digits.isdigit()):
        raise CompletionParseError(f"non-digit characters in completion {text!r}")
    if len(digits) > width:
        raise WidthOverflowError(f"completion {text!r} has {len(digits)} digits, width is {width}")
    return digits.zfill(width)
