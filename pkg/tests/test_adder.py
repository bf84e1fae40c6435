from __future__ import annotations

import math

import numpy as np
import pytest
from pydantic import ValidationError

from functions.core.adder import (
    AdderConfig,
    Strategy,
    Variant,
    build,
    build_adder,
    build_ling_adder,
    build_subtractor,
    synth_extra_step,
    synth_extra_step_ks,
    synth_step1,
    synth_step2,
    synth_step3,
    synth_step4,
)
from functions.core.analyze import report
from functions.core.prefix_tree import TreeKind, build_schedule
from functions.core.simulate import random_operands, run_adder_batch
from tests.conftest import exhaustive_pairs

TREES = list(TreeKind)
STRATEGIES = list(Strategy)


def _check_exhaustive(adder, expected_fn, check_ancilla=True):
    n = adder.config.n
    a, b = exhaustive_pairs(1 << n)
    res = run_adder_batch(adder, a, b)
    assert (res.sums == expected_fn(a, b, n)).all()
    assert res.inputs_preserved.all()
    if check_ancilla:
        assert res.ancilla_clean.all()


@pytest.mark.parametrize("tree", TREES)
@pytest.mark.parametrize("strategy", STRATEGIES)
@pytest.mark.parametrize("uncompute", [True, False])
@pytest.mark.parametrize("n", [2, 4])
def test_adder_exhaustive_small(tree, strategy, uncompute, n):
    adder = build_adder(AdderConfig(tree=tree, n=n, strategy=strategy, uncompute=uncompute))
    _check_exhaustive(adder, lambda a, b, n: a + b, check_ancilla=uncompute)


@pytest.mark.parametrize("tree", TREES)
@pytest.mark.parametrize("strategy", STRATEGIES)
def test_adder_exhaustive_n8(tree, strategy):
    adder = build_adder(AdderConfig(tree=tree, n=8, strategy=strategy))
    _check_exhaustive(adder, lambda a, b, n: a + b)


@pytest.mark.parametrize("tree", TREES)
@pytest.mark.parametrize("n", [4, 8])
def test_adder_p_in_place(tree, n):
    adder = build_adder(AdderConfig(tree=tree, n=n, strategy="and", p_in_place=True))
    _check_exhaustive(adder, lambda a, b, n: a + b)
    separate = build_adder(AdderConfig(tree=tree, n=n, strategy="and"))
    assert separate.circuit.qubit_count - adder.circuit.qubit_count == n
    assert "p" not in adder.circuit.layout


@pytest.mark.parametrize("n", [2, 4, 8])
@pytest.mark.parametrize("tree", TREES)
def test_subtractor_exhaustive(n, tree):
    sub = build_subtractor(AdderConfig(tree=tree, n=n, strategy="and", variant="subtract"))
    _check_exhaustive(sub, lambda a, b, n: a - b + (1 << n))
    assert set(sub.steps) >= {"complement_in", "step1", "step2", "step3", "step4", "complement_out"}


@pytest.mark.parametrize("n", [4, 8])
@pytest.mark.parametrize("strategy", STRATEGIES)
def test_ling_exhaustive(n, strategy):
    ling = build_ling_adder(n, strategy)
    _check_exhaustive(ling, lambda a, b, n: a + b)
    assert ling.config.variant is Variant.LING
    assert list(ling.steps) == ["ling_init", "ling_tree", "carries", "uncompute", "p_compute", "step4"]


@pytest.mark.parametrize("n", [4, 8, 16, 32, 64, 128, 256])
def test_sklansky_depth_halving(n):
    L = int(math.log2(n))
    s1 = report(build_adder(AdderConfig(tree="sklansky", n=n, strategy="toffoli")).circuit)
    s2 = report(build_adder(AdderConfig(tree="sklansky", n=n, strategy="and")).circuit)
    assert s2.toffoli_depth == L + 1
    assert s2.toffoli_critical_path == L + 1
    # the product uncompute walks back one level at a time after the 2L forward layers
    assert s1.toffoli_critical_path == 3 * L - 1
    assert s1.toffoli_depth >= s1.toffoli_critical_path > s2.toffoli_depth


def test_sklansky_toffoli_only_n4_depth():
    rep = report(build_adder(AdderConfig(tree="sklansky", n=4, strategy="toffoli")).circuit)
    assert rep.toffoli_depth == 5


@pytest.mark.parametrize("n", [4, 8, 16, 32, 64])
def test_kogge_stone_logical_and_depth(n):
    rep = report(build_adder(AdderConfig(tree="kogge-stone", n=n, strategy="and")).circuit)
    assert rep.toffoli_critical_path == int(math.log2(n)) + 2
    assert rep.toffoli_depth >= rep.toffoli_critical_path


# toffoli_critical_path at n = 8 and n = 16
CRITICAL_PATHS = {
    ("brent-kung", "toffoli"): (8, 11),
    ("sklansky", "toffoli"): (8, 11),
    ("kogge-stone", "toffoli"): (10, 14),
    ("han-carlson", "toffoli"): (10, 14),
    ("ladner-fischer", "toffoli"): (8, 11),
    ("brent-kung", "and"): (5, 7),
    ("sklansky", "and"): (4, 5),
    ("kogge-stone", "and"): (5, 6),
    ("han-carlson", "and"): (6, 7),
    ("ladner-fischer", "and"): (5, 6),
}


@pytest.mark.parametrize("tree, strategy", sorted(CRITICAL_PATHS))
@pytest.mark.parametrize("n", [8, 16])
def test_depths_per_tree_and_strategy(tree, strategy, n):
    rep = report(build_adder(AdderConfig(tree=tree, n=n, strategy=strategy)).circuit)
    assert rep.toffoli_critical_path == CRITICAL_PATHS[(tree, strategy)][n == 16]
    assert rep.toffoli_critical_path <= rep.toffoli_depth <= rep.total_depth
    assert rep.toffoli_depth <= rep.toffoli_count


# (toffoli_count, and_pair_count) at n = 8, step-1 Toffolis included
COUNTS_N8 = {
    ("brent-kung", "toffoli"): (27, 0),
    ("sklansky", "toffoli"): (30, 0),
    ("kogge-stone", "toffoli"): (59, 0),
    ("han-carlson", "toffoli"): (38, 0),
    ("ladner-fischer", "toffoli"): (27, 0),
    ("brent-kung", "and"): (19, 4),
    ("sklansky", "and"): (20, 5),
    ("kogge-stone", "and"): (31, 14),
    ("han-carlson", "and"): (24, 7),
    ("ladner-fischer", "and"): (19, 4),
}


@pytest.mark.parametrize("tree, strategy", sorted(COUNTS_N8))
def test_counts_per_tree_and_strategy(tree, strategy):
    rep = report(build_adder(AdderConfig(tree=tree, n=8, strategy=strategy)).circuit)
    assert (rep.toffoli_count, rep.and_pair_count) == COUNTS_N8[(tree, strategy)]


@pytest.mark.parametrize("tree", TREES)
@pytest.mark.parametrize("n", [4, 8, 16, 32])
def test_and_pairs_replace_toffoli_pairs(tree, n):
    s1 = report(build_adder(AdderConfig(tree=tree, n=n, strategy="toffoli")).circuit)
    s2 = report(build_adder(AdderConfig(tree=tree, n=n, strategy="and")).circuit)
    # every AND pair stands for a compute Toffoli and its uncompute
    assert s1.toffoli_count == s2.toffoli_count + 2 * s2.and_pair_count
    assert s2.and_pair_count == s2.and_uncompute_count


@pytest.mark.parametrize("n", [4, 8, 16, 32, 64])
def test_sklansky_toffoli_only_count(n):
    L = int(math.log2(n))
    rep = report(build_adder(AdderConfig(tree="sklansky", n=n, strategy="toffoli")).circuit)
    assert rep.toffoli_count == 3 * n * L // 2 - n + 2


@pytest.mark.parametrize("n", [4, 8, 16, 32, 64])
@pytest.mark.parametrize("p_in_place", [False, True])
def test_sklansky_qubits_track_reference(n, p_in_place):
    L = int(math.log2(n))
    reference = n + n * L + L + 2 - (n if p_in_place else 0)
    adder = build_adder(AdderConfig(tree="sklansky", n=n, strategy="and", p_in_place=p_in_place))
    assert adder.circuit.qubit_count - reference <= 7
    assert adder.fanout_summary["reused_ancillas"] > 0 or n == 4


@pytest.mark.parametrize("tree", TREES)
@pytest.mark.parametrize("strategy", STRATEGIES)
def test_adder_without_uncompute_n8(tree, strategy):
    adder = build_adder(AdderConfig(tree=tree, n=8, strategy=strategy, uncompute=False))
    _check_exhaustive(adder, lambda a, b, n: a + b, check_ancilla=False)
    assert adder.step_fragment("step3").gates == ()
    assert adder.step_fragment("extra").gates == ()


@pytest.mark.parametrize("n", [4, 8, 16, 32])
def test_kogge_stone_step3_walks_back_one_level_at_a_time(n):
    L = int(math.log2(n))
    rep = report(synth_step3(build_schedule("kogge-stone", n), "toffoli"))
    assert rep.toffoli_critical_path == L - 1
    assert rep.toffoli_depth >= L - 1


def test_sklansky_logical_and_toffoli_count(sk8_and):
    rep = report(sk8_and.circuit)
    # step-1 g_i plus one in-place G update per node
    assert rep.toffoli_count == 8 + 12
    assert rep.and_pair_count == rep.and_uncompute_count > 0


def test_toffoli_strategy_has_no_and_pairs(sk8_toffoli):
    assert report(sk8_toffoli.circuit).and_pair_count == 0


@pytest.mark.parametrize("tree", TREES)
def test_strategies_agree_on_random_inputs(tree):
    a, b = random_operands(16, 1000, seed=7)
    s1 = run_adder_batch(build_adder(AdderConfig(tree=tree, n=16, strategy="toffoli")), a, b)
    s2 = run_adder_batch(build_adder(AdderConfig(tree=tree, n=16, strategy="and")), a, b)
    assert (s1.sums == s2.sums).all()
    assert (s1.sums == a + b).all()


def test_step_fragments():
    assert report(synth_step1(8)).toffoli_count == 8
    assert report(synth_step4(8)).toffoli_count == 0
    assert synth_step1(8).layout.names == ("a", "b", "p", "g_sum", "carry_out")
    assert "p" not in synth_step4(8, p_in_place=True).layout


def test_step2_and_step3_mirror_the_and_pairs():
    s = build_schedule("sklansky", 8)
    step2, step3 = report(synth_step2(s, "and")), report(synth_step3(s, "and"))
    assert step2.and_pair_count == step3.and_uncompute_count > 0
    assert step3.toffoli_count == 0


def test_extra_step():
    assert report(synth_extra_step_ks(8)).toffoli_count == 6
    assert len(synth_extra_step(build_schedule("sklansky", 8))) == 0
    assert len(synth_extra_step(build_schedule("han-carlson", 8))) > 0
    with pytest.raises(ValueError, match="does not apply"):
        synth_extra_step_ks(8, "sklansky")


def test_steps_partition_the_circuit(sk8_and):
    ranges = sorted(sk8_and.steps.values())
    assert ranges[0][0] == 0 and ranges[-1][1] == len(sk8_and.circuit)
    assert all(prev[1] == nxt[0] for prev, nxt in zip(ranges, ranges[1:]))
    assert len(sk8_and.step_fragment("step1")) == 8 + 16
    with pytest.raises(ValueError, match="unknown step"):
        sk8_and.step_fragment("step9")


def test_layout_and_sum_register(sk8_and):
    layout = sk8_and.circuit.layout
    assert layout.names == ("a", "b", "p", "g_sum", "carry_out", "ancilla")
    assert len(sk8_and.sum_qubits) == 9
    assert set(sk8_and.ancilla_qubits).isdisjoint(sk8_and.sum_qubits)


def test_fanout_summary_reports_sklansky_g_copies(sk8_and):
    summary = sk8_and.fanout_summary
    assert summary["g_copies"] > 0
    assert summary["p_products"] == 5
    assert summary["uncompute_copies"] > 0
    assert summary["reused_ancillas"] > 0
    assert [lv["level"] for lv in summary["per_level"]] == [1, 2, 3]
    assert summary["seed_copies"] == 0


def test_config_validation():
    with pytest.raises(ValidationError, match="n must be a power of two"):
        AdderConfig(n=6)
    with pytest.raises(ValidationError, match="kogge-stone"):
        AdderConfig(tree="sklansky", n=8, variant="ling")
    with pytest.raises(ValidationError, match="n >= 4"):
        AdderConfig(tree="kogge-stone", n=2, variant="ling")
    assert AdderConfig(tree="ks", n=8, strategy="s1").strategy is Strategy.TOFFOLI_ONLY


def test_builders_check_variant():
    with pytest.raises(ValueError, match="expects variant 'add'"):
        build_adder(AdderConfig(n=4, variant="subtract"))
    with pytest.raises(ValueError, match="expects variant 'subtract'"):
        build_subtractor(AdderConfig(n=4))


def test_build_dispatch():
    assert build(AdderConfig(tree="kogge-stone", n=4, variant="ling")).config.variant is Variant.LING
    sub = build(AdderConfig(n=4, variant="subtract"))
    res = run_adder_batch(sub, np.array([3]), np.array([5]))
    assert int(res.sums[0]) == 3 - 5 + 16


def test_labels():
    assert AdderConfig(tree="sklansky", n=8, strategy="and").label == "sklansky+s2"
    assert AdderConfig(tree="kogge-stone", n=8, variant="ling").label == "kogge-stone+s2+ling"
