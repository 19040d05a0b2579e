"""Arithmetic-learning datasets, label-space statistics, subgroup quality,
partial-product diagnostics and position-level scoring."""

from .errors import ArithError
from .taskspec import (
    ExampleRecord,
    Format,
    Operator,
    Rule,
    TaskSpec,
    apply_operator,
    output_width,
    parse_completion,
    parse_spec,
    render_example,
)

__version__ = "0.1.0"
