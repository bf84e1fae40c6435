# functions/core/analyze.py
"""
Resource Analysis — Layering, Metrics, Closed-Form Cross-Checks, Comparison Sweeps

Intent
- Schedule a circuit into ASAP layers under the shared-qubit conflict rule.
- Extract a ResourceReport (counts, depths, qubits, extra T accounting).
- Compare measured reports against the published closed forms and return a
  machine-readable discrepancy record instead of failing.
- Produce the adder comparison table (formula rows for the whole catalogue,
  measured rows for the synthesized trees) as a pandas DataFrame.

Metric definitions
- total_depth: number of ASAP layers; two gates sharing any qubit never share a layer.
- toffoli_depth: number of ASAP layers containing at least one TOFFOLI.
- and_depth: number of ASAP layers containing at least one AND_COMPUTE.
- toffoli_critical_path: Toffoli-weighted critical path. Every gate orders the
  qubits it touches; only TOFFOLI gates add one unit. It is a lower bound on
  toffoli_depth and is what a scheduler free to delay gates could reach.
- and_critical_path: the same path with AND_COMPUTE gates weighted instead.
- extra_t_count = 4 x AND pairs; extra_t_depth = 2 whenever any AND pair exists.

Primary API
- schedule(circuit) -> LayeredSchedule
- report(circuit) -> ResourceReport
- check_against_paper(report, tree, strategy, n, *, variant="add", modular=False, alternates=None)
- comparison_sweep(n_values, *, radix=None, measured_max_n=0, max_workers=1) -> DataFrame
- depth_ordering_violations(sweep_df) -> list[str]
- conflict_graph(circuit) / longest_path_layers(circuit): networkx cross-check of the scheduler
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Tuple

import networkx as nx
import pandas as pd
from pydantic import BaseModel, ConfigDict, model_validator

from functions.core import formulas
from functions.core.adder import AdderCircuit, AdderConfig, Strategy, Variant, build_adder
from functions.core.circuit import Circuit, GateKind
from functions.core.modular import ModularCircuit
from functions.core.prefix_tree import TreeKind, require_power_of_two
from functions.utils.logging import get_logger

logger = get_logger(__name__)

SWEEP_COLUMNS = ["adder", "n", "toffoli_count", "toffoli_depth", "qubit_count", "source"]


# -----------------------------
# Layering
# -----------------------------
@dataclass(frozen=True)
class LayeredSchedule:
    layers: Tuple[Tuple[int, ...], ...]
    assignment: Tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.layers)


def schedule(circuit: Circuit) -> LayeredSchedule:
    ready = [0] * circuit.qubit_count
    assignment: List[int] = []
    layers: List[List[int]] = []
    for i, g in enumerate(circuit.gates):
        layer = max(ready[q] for q in g.qubits)
        for q in g.qubits:
            ready[q] = layer + 1
        if layer == len(layers):
            layers.append([])
        layers[layer].append(i)
        assignment.append(layer)
    return LayeredSchedule(tuple(tuple(layer) for layer in layers), tuple(assignment))


def conflict_graph(circuit: Circuit) -> nx.DiGraph:
    """Edge i -> j for every earlier gate i sharing a qubit with gate j (quadratic)."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(circuit.gates)))
    qubit_sets = [set(g.qubits) for g in circuit.gates]
    for j in range(len(qubit_sets)):
        for i in range(j):
            if qubit_sets[i] & qubit_sets[j]:
                graph.add_edge(i, j)
    return graph


def longest_path_layers(circuit: Circuit) -> Tuple[int, ...]:
    """Layer of each gate as the longest conflict chain ending at it."""
    graph = conflict_graph(circuit)
    layer: Dict[int, int] = {}
    for node in nx.topological_sort(graph):
        layer[node] = max((layer[p] + 1 for p in graph.predecessors(node)), default=0)
    return tuple(layer[i] for i in range(len(circuit.gates)))


def _weighted_depth(circuit: Circuit, weighted: GateKind) -> int:
    t = [0] * circuit.qubit_count
    depth = 0
    for g in circuit.gates:
        s = max(t[q] for q in g.qubits) + (1 if g.kind is weighted else 0)
        for q in g.qubits:
            t[q] = s
        depth = max(depth, s)
    return depth


# -----------------------------
# Reports
# -----------------------------
class ResourceReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    toffoli_count: int = 0
    and_pair_count: int = 0
    and_uncompute_count: int = 0
    cnot_count: int = 0
    x_count: int = 0
    gate_count: int = 0
    toffoli_depth: int = 0
    and_depth: int = 0
    total_depth: int = 0
    toffoli_critical_path: int = 0
    and_critical_path: int = 0
    qubit_count: int = 0
    extra_t_count: int = 0
    extra_t_depth: int = 0

    @model_validator(mode="after")
    def _check(self) -> "ResourceReport":
        if self.toffoli_depth > self.total_depth:
            raise ValueError("toffoli_depth must be <= total_depth")
        if self.toffoli_critical_path > self.toffoli_depth:
            raise ValueError("toffoli_critical_path must be <= toffoli_depth")
        return self


def report(circuit: Circuit) -> ResourceReport:
    counts = {kind: 0 for kind in GateKind}
    for g in circuit.gates:
        counts[g.kind] += 1
    sched = schedule(circuit)
    kinds = [g.kind for g in circuit.gates]
    tof_layers = sum(1 for layer in sched.layers if any(kinds[i] is GateKind.TOFFOLI for i in layer))
    and_layers = sum(1 for layer in sched.layers if any(kinds[i] is GateKind.AND_COMPUTE for i in layer))
    pairs = counts[GateKind.AND_COMPUTE]
    return ResourceReport(
        toffoli_count=counts[GateKind.TOFFOLI],
        and_pair_count=pairs,
        and_uncompute_count=counts[GateKind.AND_UNCOMPUTE],
        cnot_count=counts[GateKind.CNOT],
        x_count=counts[GateKind.X],
        gate_count=len(circuit.gates),
        toffoli_depth=tof_layers,
        and_depth=and_layers,
        total_depth=sched.depth,
        toffoli_critical_path=_weighted_depth(circuit, GateKind.TOFFOLI),
        and_critical_path=_weighted_depth(circuit, GateKind.AND_COMPUTE),
        qubit_count=circuit.qubit_count,
        extra_t_count=4 * pairs,
        extra_t_depth=2 if pairs else 0,
    )


# -----------------------------
# Closed-form cross-checks
# -----------------------------
class MetricComparison(BaseModel):
    model_config = ConfigDict(frozen=True)

    metric: str
    source: str
    measured: float
    expected: float
    delta: float
    match: bool
    note: str = ""


class DiscrepancyRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    n: int
    comparisons: Tuple[MetricComparison, ...] = ()

    @property
    def discrepancies(self) -> List[MetricComparison]:
        return [c for c in self.comparisons if not c.match]

    @property
    def is_clean(self) -> bool:
        return not self.discrepancies

    def get(self, metric: str, source: Optional[str] = None, note: Optional[str] = None) -> MetricComparison:
        for c in self.comparisons:
            if c.metric == metric and (source is None or c.source == source) and (note is None or c.note == note):
                return c
        raise KeyError(f"no comparison for {metric!r}")


def _reference_rows(
    tree: TreeKind, strategy: Strategy, variant: Variant, modular: bool
) -> List[Tuple[str, str]]:
    if modular:
        if variant is Variant.LING:
            raise ValueError("unknown (tree, strategy) pair: no modular Ling reference")
        rows = [("table7", f"{tree.value}+{strategy.short}")]
        if tree is TreeKind.SKLANSKY and strategy is Strategy.LOGICAL_AND:
            rows.append(("prose", "sklansky+s2+modular"))
        return rows
    if variant is Variant.LING:
        if tree is not TreeKind.KOGGE_STONE:
            raise ValueError(f"unknown (tree, strategy) pair: ({tree.value}, {strategy.value}) with Ling")
        if strategy is Strategy.TOFFOLI_ONLY:
            return [("table5", "kogge-stone+ling"), ("prose", "kogge-stone+ling")]
        return [("table6", "kogge-stone+ling"), ("prose", "kogge-stone+ling")]
    return [("table2" if strategy is Strategy.TOFFOLI_ONLY else "table3", tree.value)]


def _compare(metric: str, source: str, measured: float, expected: float, note: str = "") -> MetricComparison:
    delta = float(measured) - float(expected)
    return MetricComparison(
        metric=metric,
        source=source,
        measured=float(measured),
        expected=float(expected),
        delta=delta,
        match=abs(delta) < 1e-9,
        note=note,
    )


def check_against_paper(
    rep: ResourceReport,
    tree: TreeKind | str,
    strategy: Strategy | str,
    n: int,
    *,
    variant: Variant | str = Variant.ADD,
    modular: bool = False,
    alternates: Optional[Dict[str, Tuple[str, float]]] = None,
) -> DiscrepancyRecord:
    """
    Compare every metric the reference rows define; never raises for mismatches.

    `alternates` maps a label to (metric, measured value) for alternative
    accountings, e.g. {"without step-1 Toffolis": ("toffoli_count", 44)}.
    """
    tree = TreeKind.parse(tree)
    strategy = Strategy.parse(strategy)
    variant = Variant(variant)
    require_power_of_two(n)
    measured = rep.model_dump()

    comparisons: List[MetricComparison] = []
    for table, row in _reference_rows(tree, strategy, variant, modular):
        expected = formulas.evaluate(table, row, n)
        source = f"{table}:{row}"
        for metric, value in expected.items():
            if metric in measured:
                comparisons.append(_compare(metric, source, measured[metric], value))
        for note, (metric, value) in (alternates or {}).items():
            if metric in expected:
                comparisons.append(_compare(metric, source, value, expected[metric], note=note))

    label = f"{tree.value}+{strategy.short}" + ("+modular" if modular else "")
    if variant is not Variant.ADD:
        label += f"+{variant.value}"
    record = DiscrepancyRecord(label=label, n=n, comparisons=tuple(comparisons))
    if record.discrepancies:
        logger.debug("%s n=%d: %d formula discrepancies", label, n, len(record.discrepancies))
    return record


def adder_alternates(adder: AdderCircuit) -> Dict[str, Tuple[str, float]]:
    """Prefix-tree-only Toffoli count (step-1 g_i Toffolis excluded) and the weighted depth."""
    total = report(adder.circuit)
    out = {"toffoli critical path": ("toffoli_depth", total.toffoli_critical_path)}
    if "step1" in adder.steps:
        step1 = report(adder.step_fragment("step1"))
        out["without step-1 Toffolis"] = ("toffoli_count", total.toffoli_count - step1.toffoli_count)
    return out


def modular_alternates(mod: ModularCircuit) -> Dict[str, Tuple[str, float]]:
    """Counts and depth with the two Set 0 blocks left out."""
    drop = {i for name in ("set0", "unset0") for i in range(*mod.blocks[name])}
    rest = Circuit(mod.circuit.layout, tuple(g for i, g in enumerate(mod.circuit.gates) if i not in drop))
    rep = report(rest)
    return {
        "without Set 0": ("toffoli_count", rep.toffoli_count),
        "without Set 0 (depth)": ("toffoli_depth", rep.toffoli_depth),
    }


# -----------------------------
# Comparison sweep
# -----------------------------
def _formula_rows(n: int, radix: Optional[int]) -> List[Dict[str, Any]]:
    out: List[Dict[str, Any]] = []
    for row in formulas.rows("table4"):
        if row == "higher_radix":
            if radix is None or radix > n:
                continue
            values = formulas.evaluate("table4", row, n, radix)
            name = f"higher_radix_r{radix}"
        else:
            values = formulas.evaluate("table4", row, n)
            name = row
        out.append({"adder": name, "n": n, **values, "source": "formula"})
    for tree in TreeKind:
        for strategy, table in ((Strategy.TOFFOLI_ONLY, "table2"), (Strategy.LOGICAL_AND, "table3")):
            values = formulas.evaluate(table, tree.value, n)
            out.append(
                {
                    "adder": f"{tree.value}+{strategy.short}",
                    "n": n,
                    "toffoli_count": values["toffoli_count"],
                    "toffoli_depth": values["toffoli_depth"],
                    "qubit_count": values["qubit_count"],
                    "source": "formula",
                }
            )
    return out


def measured_row(tree: TreeKind, strategy: Strategy, n: int) -> Dict[str, Any]:
    adder = build_adder(AdderConfig(tree=tree, n=n, strategy=strategy))
    rep = report(adder.circuit)
    return {
        "adder": f"{tree.value}+{strategy.short}",
        "n": n,
        "toffoli_count": rep.toffoli_count,
        "toffoli_depth": rep.toffoli_depth,
        "qubit_count": rep.qubit_count,
        "source": "measured",
    }


def comparison_sweep(
    n_values: Iterable[int],
    *,
    radix: Optional[int] = None,
    measured_max_n: int = 0,
    max_workers: int = 1,
) -> pd.DataFrame:
    ns = sorted({int(n) for n in n_values})
    for n in ns:
        require_power_of_two(n)
    if radix is not None and radix <= 2:
        raise ValueError(f"radix r out of range: requires 2 < r <= n (got r={radix})")

    rows: List[Dict[str, Any]] = []
    for n in ns:
        rows.extend(_formula_rows(n, radix))

    jobs = [(t, s, n) for n in ns if n <= measured_max_n for t in TreeKind for s in Strategy]
    if jobs:
        with ThreadPoolExecutor(max_workers=max(1, max_workers)) as ex:
            rows.extend(ex.map(lambda job: measured_row(*job), jobs))

    df = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    logger.debug("Comparison sweep: %d rows over n=%s (%d measured)", len(df), ns, len(jobs))
    return df


def depth_ordering_violations(df: pd.DataFrame, *, min_n: int = 8) -> List[str]:
    """Optimal+S2 < Optimal+S1 < min(Draper out-of-place, Quantum Ling) in toffoli_depth."""
    formula = df[df["source"] == "formula"].set_index(["adder", "n"])["toffoli_depth"]
    problems: List[str] = []
    for n in sorted({int(v) for v in df["n"] if int(v) >= min_n}):
        try:
            s2 = formula[("optimal_s2", n)]
            s1 = formula[("optimal_s1", n)]
            rival = min(formula[("draper_out_of_place", n)], formula[("quantum_ling", n)])
        except KeyError:
            problems.append(f"n={n}: missing comparison rows")
            continue
        if not s2 < s1:
            problems.append(f"n={n}: optimal_s2 depth {s2} is not below optimal_s1 depth {s1}")
        if not s1 < rival:
            problems.append(f"n={n}: optimal_s1 depth {s1} is not below the best CLA rival {rival}")
    return problems


__all__ = [
    "SWEEP_COLUMNS",
    "LayeredSchedule",
    "schedule",
    "conflict_graph",
    "longest_path_layers",
    "ResourceReport",
    "report",
    "MetricComparison",
    "DiscrepancyRecord",
    "check_against_paper",
    "adder_alternates",
    "modular_alternates",
    "comparison_sweep",
    "measured_row",
    "depth_ordering_violations",
]
