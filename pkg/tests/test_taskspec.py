import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arithsym import Format, Operator, Rule, TaskSpec, apply_operator, output_width, parse_completion, parse_spec, render_example
from arithsym.errors import CompletionParseError, DomainError, SpecError, WidthOverflowError
from arithsym.generator import enumerate_domain
from arithsym.taskspec import parse_prompt, task_id
from helpers import make_spec


@pytest.mark.parametrize(
    "a, b, spec, expected",
    [
        (12, 34, make_spec("mul"), 408),
        (13, 27, make_spec("mul", kind="scale", value=8), 2808),
        (10, 10, make_spec("add", kind="translate", value=115), 135),
        (57, 68, make_spec("add", kind="mod", value=100), 25),
    ],
)
def test_apply_operator_examples(a, b, spec, expected):
    assert apply_operator(a, b, spec) == expected


@pytest.mark.parametrize("a, b", [(9, 50), (50, 100), (0, 0), (-12, 34)])
def test_apply_operator_rejects_out_of_domain(a, b):
    with pytest.raises(DomainError):
        apply_operator(a, b, make_spec())


@pytest.mark.parametrize(
    "spec, width",
    [
        (make_spec("add"), 3),
        (make_spec("mul", kind="scale", value=2), 5),
        (make_spec("add", kind="mod", value=10), 1),
        (make_spec("mul"), 4),
        (make_spec("add", kind="translate", value=115), 3),
        (make_spec("mul", 3), 6),
        (make_spec("mul", 5), 10),
    ],
)
def test_output_width(spec, width):
    assert output_width(spec) == width


@given(op=st.sampled_from(["add", "mul"]), n=st.integers(1, 8))
def test_width_monotone_under_scale(op, n):
    w = [output_width(make_spec(op, n))] + [output_width(make_spec(op, n, "scale", lam)) for lam in (2, 4, 8)]
    assert w == sorted(w)


@given(
    op=st.sampled_from(["add", "mul"]),
    m=st.integers(2, 1000),
    a=st.integers(10, 99),
    b=st.integers(10, 99),
)
def test_mod_results_in_range(op, m, a, b):
    assert 0 <= apply_operator(a, b, make_spec(op, 2, "mod", m)) <= m - 1


def test_render_mul_pads_completion():
    r = render_example(12, 34, make_spec("mul"))
    assert r.completion == "0 4 0 8"
    assert r.c_digits == "0408"


def test_render_plain_prompt():
    r = render_example(13, 10, make_spec("mul"))
    assert "1 3 × 1 0 =" in r.prompt
    assert r.text == "1 3 × 1 0 = 0 1 3 0"


@pytest.mark.parametrize(
    "op, fmt, prompt",
    [
        ("add", "nl", "What is 1 2 add 3 4? Answer:"),
        ("mul", "nl", "What is 1 2 multiply 3 4? Answer:"),
        ("add", "rs", "fafr if 1 2 hfk 3 4? Ffhjar:"),
        ("mul", "rs", "fafr if 1 2 hfk 3 4? Ffhjar:"),
        ("add", "dd", "3.123 34 1 2 461 3 4? 952414:"),
        ("add", "plain", "1 2 + 3 4 ="),
    ],
)
def test_template_prompts(op, fmt, prompt):
    assert render_example(12, 34, make_spec(op, fmt=fmt)).prompt == prompt


def test_parse_completion_examples(mul2):
    assert parse_completion("0 4 0 8", mul2) == "0408"
    assert parse_completion("408", mul2) == "0408"
    with pytest.raises(WidthOverflowError):
        parse_completion("4 0 8 9 9", mul2)
    for bad in ("4o8", "4 0 8.", "", "   ", "-408", "٤٠٨"):
        with pytest.raises(CompletionParseError):
            parse_completion(bad, mul2)


@pytest.mark.parametrize("op", ["add", "mul"])
@pytest.mark.parametrize("n", [1, 2])
def test_round_trip_exhaustive(op, n):
    for fmt in Format:
        spec = make_spec(op, n, fmt=fmt.value)
        for a, b in enumerate_domain(spec):
            r = render_example(a, b, spec)
            assert parse_completion(r.completion, spec) == str(apply_operator(a, b, spec)).zfill(spec.width)
            assert parse_prompt(r.prompt, spec.operator, spec.format) == (a, b)


@settings(max_examples=300)
@given(
    n=st.integers(3, 7),
    op=st.sampled_from(["add", "mul"]),
    fmt=st.sampled_from([f.value for f in Format]),
    data=st.data(),
)
def test_round_trip_sampled(n, op, fmt, data):
    spec = make_spec(op, n, fmt=fmt)
    a = data.draw(st.integers(spec.lo, spec.hi))
    b = data.draw(st.integers(spec.lo, spec.hi))
    r = render_example(a, b, spec)
    assert len(r.c_digits) == spec.width and r.c_digits.isdigit()
    assert int(parse_completion(r.completion, spec)) == apply_operator(a, b, spec)
    assert parse_prompt(r.prompt, spec.operator, spec.format) == (a, b)


@pytest.mark.parametrize(
    "text",
    ["add:n=2:rule=mod50:fmt=plain", "mul:n=3:rule=times8:fmt=dd", "add:n=1:rule=plus115:fmt=nl", "mul:n=2:rule=none:fmt=rs"],
)
def test_spec_string_round_trip(text):
    assert parse_spec(text).canonical() == text


def test_spec_string_defaults():
    s = parse_spec("add:n=2")
    assert s == TaskSpec(Operator.ADD, 2, Rule.none(), Format.PLAIN)


@pytest.mark.parametrize(
    "text",
    ["sub:n=2", "add", "add:n=0", "add:n=x", "add:n=2:rule=mod1", "add:n=2:rule=times1", "add:n=2:fmt=xml", "add:n=2:foo=1", "add:n=2:n=3"],
)
def test_bad_spec_strings(text):
    with pytest.raises(SpecError):
        parse_spec(text)


def test_task_id_stable_and_distinct(add2):
    ids = {task_id(add2, a, b) for a, b in enumerate_domain(add2)}
    assert len(ids) == 8100
    assert task_id(add2, 12, 34) == task_id(parse_spec("add:n=2"), 12, 34)
    assert task_id(add2, 12, 34) != task_id(add2.with_(format=Format.NATURAL_LANGUAGE), 12, 34)
