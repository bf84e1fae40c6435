from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from functions.core.prefix_tree import (
    FanoutOp,
    Span,
    TreeKind,
    build_schedule,
    evaluate_carries,
    expected_shape,
    require_power_of_two,
    schedule_graph,
    schedule_to_dict,
    validate_schedule,
)

WIDTHS = [2, 4, 8, 16, 32, 64]


def classical_carries(a: int, b: int, n: int):
    return tuple(((a % (1 << (i + 1))) + (b % (1 << (i + 1)))) >> (i + 1) for i in range(n))


@pytest.mark.parametrize("tree", list(TreeKind))
@pytest.mark.parametrize("n", WIDTHS)
def test_shape_matches_closed_forms(tree, n):
    s = build_schedule(tree, n)
    shape = expected_shape(tree, n)
    assert s.level_count == shape["levels"]
    assert s.node_count == shape["nodes"]


@pytest.mark.parametrize("tree", list(TreeKind))
@pytest.mark.parametrize("n", WIDTHS)
def test_schedules_validate_clean(tree, n):
    assert validate_schedule(build_schedule(tree, n)) == []


def test_known_shapes():
    assert (build_schedule("sklansky", 8).level_count, build_schedule("sklansky", 8).node_count) == (3, 12)
    assert build_schedule("kogge-stone", 8).node_count == 17
    assert build_schedule("brent-kung", 8).node_count == 11
    assert build_schedule("brent-kung", 16).node_count == 26


@pytest.mark.parametrize("tree", list(TreeKind))
def test_carries_exhaustive_n4(tree):
    s = build_schedule(tree, 4)
    for a in range(16):
        for b in range(16):
            assert evaluate_carries(s, a, b) == classical_carries(a, b, 4)


@settings(max_examples=50, deadline=None)
@given(
    tree=st.sampled_from(list(TreeKind)),
    a=st.integers(min_value=0, max_value=(1 << 16) - 1),
    b=st.integers(min_value=0, max_value=(1 << 16) - 1),
)
def test_carries_random_n16(tree, a, b):
    assert evaluate_carries(build_schedule(tree, 16), a, b) == classical_carries(a, b, 16)


def test_final_carry_is_full_span():
    s = build_schedule("kogge-stone", 8)
    assert s.required_carries[-1] == Span(7, 0)
    last = s.levels[-1].nodes
    assert all(nd.out_span.lo == 0 for nd in last)


@pytest.mark.parametrize("tree", list(TreeKind))
def test_last_level_never_needs_p(tree):
    s = build_schedule(tree, 16)
    assert not any(nd.needs_p_output for nd in s.levels[-1].nodes)


def test_sklansky_top_level_fans_out_low_g():
    s = build_schedule("sklansky", 8)
    assert FanoutOp(level=3, span=Span(3, 0), kind="G", copy_count=3) in s.levels[2].fanouts


def test_kogge_stone_needs_no_fanout_beyond_two_readers():
    s = build_schedule("kogge-stone", 8)
    assert all(f.copy_count == 1 for lv in s.levels for f in lv.fanouts)


def test_validate_reports_missing_carry():
    s = build_schedule("sklansky", 4)
    truncated = type(s)(tree=s.tree, n=s.n, levels=s.levels[:1])
    problems = validate_schedule(truncated)
    assert any("missing carry G[0:3]" in p for p in problems)


def test_require_power_of_two():
    assert require_power_of_two(64) == 6
    with pytest.raises(ValueError, match="n must be a power of two"):
        require_power_of_two(6)
    with pytest.raises(ValueError, match="n must be >= 2"):
        require_power_of_two(1)


def test_tree_kind_parse_aliases():
    assert TreeKind.parse("KS") is TreeKind.KOGGE_STONE
    assert TreeKind.parse("ladner_fischer") is TreeKind.LADNER_FISCHER
    with pytest.raises(ValueError, match="unknown tree kind"):
        TreeKind.parse("ripple")


def test_schedule_graph_is_a_dag():
    s = build_schedule("han-carlson", 16)
    g = schedule_graph(s)
    assert g.number_of_nodes() == s.node_count
    assert nx.is_directed_acyclic_graph(g)


def test_schedule_to_dict():
    d = schedule_to_dict(build_schedule("brent-kung", 8))
    assert d["tree"] == "brent-kung"
    assert d["level_count"] == len(d["levels"]) == 4
    assert sum(len(lv["nodes"]) for lv in d["levels"]) == d["node_count"]
