import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arithsym import stats
from arithsym.errors import ArithError, BudgetError
from arithsym.stats import entropy, label_space_stats, merge_counts, positional_distribution, round4
from arithsym.taskspec import Format
from helpers import TABLE3_RULES, make_spec
from oracles import brute_stats


def test_entropy_uniform():
    assert entropy([1] * 10) == pytest.approx(math.log2(10), abs=1e-12)
    assert round4(entropy([5] * 10)) == 3.3219


def test_entropy_degenerate():
    assert entropy({"x": 7}) == 0.0
    assert entropy([0, 0, 3]) == 0.0


def test_entropy_closed_form():
    expected = -0.6 * math.log2(0.6) - 0.4 * math.log2(0.4)
    assert entropy([0.6, 0.4]) == pytest.approx(expected, abs=1e-12)
    assert entropy([3, 2]) == pytest.approx(expected, abs=1e-12)
    assert round4(expected) == 0.9710


@pytest.mark.parametrize("bad", [[], [0, 0], [-1, 2]])
def test_entropy_errors(bad):
    with pytest.raises(ArithError):
        entropy(bad)


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=40).filter(any))
def test_entropy_matches_naive(counts):
    total = sum(counts)
    naive = -sum(c / total * math.log2(c / total) for c in counts if c)
    assert entropy(counts) == pytest.approx(naive, abs=1e-9)
    assert 0 <= entropy(counts) <= math.log2(sum(1 for c in counts if c)) + 1e-12


def test_round4_half_even():
    assert round4(0.12345) == 0.1234
    assert round4(0.12355) == 0.1236
    assert round4(3.3214883655) == 3.3215


@pytest.mark.parametrize("op, kind, value", TABLE3_RULES)
def test_matches_brute_force(op, kind, value):
    got = label_space_stats(make_spec(op, 2, kind, value))
    pos, card, joint = brute_stats(op, 2, kind, value)
    assert got.joint_cardinality == card
    assert got.joint_entropy == pytest.approx(joint, abs=1e-10)
    assert got.per_position_entropy == pytest.approx(pos, abs=1e-10)
    assert got.domain_cardinality == 8100


@pytest.mark.parametrize(
    "spec, pos, card, joint",
    [
        (make_spec("add"), (0.9710, 3.3215, 3.3219), 179, 7.2130),
        (make_spec("mul"), (2.8979, 3.3215, 3.3160, 3.0340), 2621, 11.1172),
        (make_spec("add", kind="mod", value=50), (2.3217, 3.3219), 50, 5.6436),
    ],
)
def test_table_rows(spec, pos, card, joint):
    got = label_space_stats(spec)
    assert got.per_position_entropy == pytest.approx(pos, abs=5e-4)
    assert got.joint_cardinality == card
    assert got.joint_entropy == pytest.approx(joint, abs=5e-4)


def test_scaled_multiplication_ends():
    got = label_space_stats(make_spec("mul", kind="scale", value=2))
    assert got.per_position_entropy[0] == pytest.approx(0.6873, abs=5e-4)
    assert got.per_position_entropy[4] == pytest.approx(2.2227, abs=5e-4)


def test_positional_distribution_examples():
    assert positional_distribution(make_spec("add"), 1) == {0: 3240, 1: 4860}
    assert positional_distribution(make_spec("add", kind="mod", value=10), 1) == {d: 810 for d in range(10)}
    with pytest.raises(ArithError):
        positional_distribution(make_spec("add"), 0)
    with pytest.raises(ArithError):
        positional_distribution(make_spec("add"), 4)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("op, kind, values", [("add", "translate", (1, 15, 115)), ("mul", "scale", (2, 4, 8)), ("add", "scale", (3,)), ("mul", "translate", (7,))])
def test_bijective_rules_keep_joint_stats(n, op, kind, values):
    base = label_space_stats(make_spec(op, n))
    for v in values:
        got = label_space_stats(make_spec(op, n, kind, v))
        assert got.joint_cardinality == base.joint_cardinality
        assert got.joint_entropy == base.joint_entropy


@pytest.mark.parametrize("op, kind, value", TABLE3_RULES)
def test_format_invariance(op, kind, value):
    ref = label_space_stats(make_spec(op, 2, kind, value, "plain"))
    for fmt in Format:
        got = label_space_stats(make_spec(op, 2, kind, value, fmt.value))
        assert (got.per_position_entropy, got.joint_cardinality, got.joint_entropy) == (
            ref.per_position_entropy,
            ref.joint_cardinality,
            ref.joint_entropy,
        )


@settings(max_examples=60, deadline=None)
@given(
    op=st.sampled_from(["add", "mul"]),
    n=st.integers(1, 2),
    rule=st.sampled_from([("none", 0), ("translate", 37), ("scale", 3), ("mod", 7), ("mod", 64), ("mod", 1000)]),
)
def test_entropy_bounds(op, n, rule):
    s = label_space_stats(make_spec(op, n, *rule))
    assert all(0 <= h <= math.log2(10) + 1e-12 for h in s.per_position_entropy)
    assert max(s.per_position_entropy) <= s.joint_entropy + 1e-12
    assert s.joint_entropy <= sum(s.per_position_entropy) + 1e-12
    assert s.joint_entropy <= math.log2(s.joint_cardinality) + 1e-12


def test_budget_error():
    with pytest.raises(BudgetError):
        label_space_stats(make_spec("mul", 5))
    with pytest.raises(BudgetError):
        label_space_stats(make_spec("mul", 2), budget=8099)


def test_sampled_mode_reports_itself():
    s = label_space_stats(make_spec("mul", 5), sample_size=20_000, seed=3)
    assert s.mode == "sampled" and s.sample_size == 20_000 and s.seed == 3
    assert s.domain_cardinality == 81 * 10**8
    assert len(s.per_position_entropy) == 10
    assert s == label_space_stats(make_spec("mul", 5), sample_size=20_000, seed=3)


def test_sampled_mode_converges():
    exact = 7.2130
    hits = sum(
        abs(label_space_stats(make_spec("add"), sample_size=4000, seed=seed).joint_entropy - exact) <= 0.1
        for seed in range(100)
    )
    assert hits >= 95


def test_worker_count_does_not_change_result(monkeypatch):
    monkeypatch.setattr(stats, "CHUNK_PAIRS", 2000)
    spec = make_spec("mul", 2, "scale", 4)
    one = label_space_stats(spec, workers=1)
    two = label_space_stats(spec, workers=2)
    assert one == two


@settings(max_examples=50)
@given(st.lists(st.lists(st.integers(0, 30), max_size=40), min_size=1, max_size=5), st.randoms())
def test_merge_counts_order_free(chunks, rnd):
    parts = []
    for chunk in chunks:
        u, c = np.unique(np.array(chunk, dtype=np.int64), return_counts=True)
        parts.append((u, c.astype(np.int64)))
    shuffled = parts[:]
    rnd.shuffle(shuffled)
    u1, c1 = merge_counts(parts)
    u2, c2 = merge_counts(shuffled)
    expected = Counter(x for chunk in chunks for x in chunk)
    assert dict(zip(u1.tolist(), c1.tolist())) == expected
    assert u1.tolist() == u2.tolist() and c1.tolist() == c2.tolist()
