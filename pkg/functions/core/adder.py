# functions/core/adder.py
"""
Adder Synthesis — Prefix Schedules Lowered to Out-of-Place Quantum Adders

Intent
- Lower a PrefixSchedule into a complete out-of-place adder circuit:
  - step 1: initial p_i = a_i XOR b_i and g_i = a_i AND b_i
  - step 2: prefix combines (in-place G Toffolis, out-of-place P products)
  - step 3: uncompute of shadows and P products, newest level first
  - step 4: s_i = p_i XOR c_i onto the carry qubits, p uncomputed
  - extra step: cleanup of seed copies of g_i (Kogge-Stone, Han-Carlson)
- Build the subtractor (complement trick) and the Ling-expanded Kogge-Stone adder.

Layout (contiguous, in this order)
- a[n] (input_a), b[n] (input_b), p[n] (p_work, omitted when p_in_place),
  g_sum[n] (slot 0 = s_0, slots 1..n-1 = g_0..g_{n-2}), carry_out[1] (= g_{n-1}),
  ancilla[*] last.
- The qubit holding g_i ends step 2 holding G[0:i] = c_{i+1}; after step 4 the
  (n+1)-bit sum reads g_sum[0..n-1] followed by carry_out.

Strategies
- TOFFOLI_ONLY: every product is a Toffoli.
- LOGICAL_AND: products that are later mirrored by an uncompute (P products,
  shadow products, Ling node products) become AND_COMPUTE / AND_UNCOMPUTE pairs.
  G updates and step-1 g_i stay Toffolis.

Same-level reads (shadows)
- When a node reads the G of a column that is rewritten in the same level
  (Kogge-Stone, Han-Carlson) it reads a shadow: a fresh qubit holding that
  column's G at the required version, built out of place from the same
  operands and the previous shadow. Version-0 shadows are seed copies of g_i,
  cleaned after step 4 by recomputing a_i AND b_i onto them.

Fan-out
- Per level, every operand qubit read by u > 1 nodes gets u - 1 CNOT copies
  built as a doubling tree. All copies are undone at the end of their level and
  the qubits go back to the builder pool; step 3 rebuilds the copies it needs.
- Pooled qubits are reused only when idle by the layer of the gate that claims
  them, so reuse lowers the qubit count without adding ASAP layers.

Primary API
- synth_step1, synth_step2, synth_step3, synth_step4, synth_extra_step,
  synth_extra_step_ks
- build_adder(config), build_subtractor(config), build_ling_adder(n, strategy, ...)
- build(config): dispatch on config.variant
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from functions.core.circuit import (
    Circuit,
    CircuitBuilder,
    Gate,
    Register,
    RegisterRole,
    and_compute,
    and_uncompute,
    cnot,
    slice_gates,
    toffoli,
    x,
)
from functions.core.prefix_tree import PrefixSchedule, TreeKind, build_schedule, require_power_of_two
from functions.utils.logging import get_logger

logger = get_logger(__name__)


# -----------------------------
# Config
# -----------------------------
class Strategy(str, Enum):
    TOFFOLI_ONLY = "toffoli"
    LOGICAL_AND = "and"

    @classmethod
    def parse(cls, value: Any) -> "Strategy":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        if key in {"toffoli", "toffoli_only", "1", "s1", "strategy1"}:
            return cls.TOFFOLI_ONLY
        if key in {"and", "logical_and", "2", "s2", "strategy2"}:
            return cls.LOGICAL_AND
        raise ValueError(f"unknown strategy: {value!r}")

    @property
    def short(self) -> str:
        return "s1" if self is Strategy.TOFFOLI_ONLY else "s2"


class Variant(str, Enum):
    ADD = "add"
    SUBTRACT = "subtract"
    LING = "ling"


class AdderConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    tree: TreeKind = TreeKind.SKLANSKY
    n: int = 8
    strategy: Strategy = Strategy.LOGICAL_AND
    uncompute: bool = True
    variant: Variant = Variant.ADD
    p_in_place: bool = False

    @field_validator("tree", mode="before")
    @classmethod
    def _parse_tree(cls, v: Any) -> TreeKind:
        return TreeKind.parse(v)

    @field_validator("strategy", mode="before")
    @classmethod
    def _parse_strategy(cls, v: Any) -> Strategy:
        return Strategy.parse(v)

    @field_validator("n")
    @classmethod
    def _validate_n(cls, v: int) -> int:
        require_power_of_two(v)
        return v

    @model_validator(mode="after")
    def _validate_ling(self) -> "AdderConfig":
        if self.variant is Variant.LING:
            if self.tree is not TreeKind.KOGGE_STONE:
                raise ValueError("the Ling variant is defined on the kogge-stone tree only")
            if self.n < 4:
                raise ValueError("the Ling variant requires n >= 4")
        return self

    @property
    def label(self) -> str:
        base = f"{self.tree.value}+{self.strategy.short}"
        return base if self.variant is Variant.ADD else f"{base}+{self.variant.value}"


# -----------------------------
# Result type
# -----------------------------
@dataclass(frozen=True)
class AdderCircuit:
    circuit: Circuit
    config: AdderConfig
    steps: Dict[str, Tuple[int, int]] = field(default_factory=dict)
    fanout_summary: Dict[str, Any] = field(default_factory=dict)

    @property
    def input_a(self) -> Register:
        return self.circuit.layout.register("a")

    @property
    def input_b(self) -> Register:
        return self.circuit.layout.register("b")

    @property
    def sum_qubits(self) -> Tuple[int, ...]:
        layout = self.circuit.layout
        return tuple(layout.register("g_sum").qubits) + tuple(layout.register("carry_out").qubits)

    @property
    def ancilla_qubits(self) -> Tuple[int, ...]:
        used = set(self.input_a.qubits) | set(self.input_b.qubits) | set(self.sum_qubits)
        return tuple(q for q in range(self.circuit.qubit_count) if q not in used)

    def step_fragment(self, name: str) -> Circuit:
        if name not in self.steps:
            raise ValueError(f"unknown step {name!r}; available: {sorted(self.steps)}")
        start, stop = self.steps[name]
        return slice_gates(self.circuit, start, stop)


# -----------------------------
# Registers and the fixed steps
# -----------------------------
@dataclass(frozen=True)
class _AdderRegisters:
    n: int
    a: Register
    b: Register
    p: Optional[Register]
    g_sum: Register
    carry_out: Register

    def gq(self, m: int) -> int:
        """Qubit holding g_m (later G[0:m])."""
        return self.g_sum[m + 1] if m < self.n - 1 else self.carry_out[0]

    def pq(self, i: int) -> int:
        return self.b[i] if self.p is None else self.p[i]


def _base_registers(builder: CircuitBuilder, n: int, p_in_place: bool) -> _AdderRegisters:
    a = builder.add_register("a", RegisterRole.INPUT_A, n)
    b = builder.add_register("b", RegisterRole.INPUT_B, n)
    p = None if p_in_place else builder.add_register("p", RegisterRole.P_WORK, n)
    g_sum = builder.add_register("g_sum", RegisterRole.G_SUM, n)
    carry_out = builder.add_register("carry_out", RegisterRole.CARRY_OUT, 1)
    return _AdderRegisters(n=n, a=a, b=b, p=p, g_sum=g_sum, carry_out=carry_out)


def _p_compute_gates(regs: _AdderRegisters) -> List[Gate]:
    gates: List[Gate] = []
    for i in range(regs.n):
        if regs.p is None:
            gates.append(cnot(regs.a[i], regs.b[i]))
        else:
            gates.append(cnot(regs.a[i], regs.p[i]))
            gates.append(cnot(regs.b[i], regs.p[i]))
    return gates


def _step1_gates(regs: _AdderRegisters) -> List[Gate]:
    gates = [toffoli(regs.a[i], regs.b[i], regs.gq(i)) for i in range(regs.n)]
    return gates + _p_compute_gates(regs)


def _step4_gates(regs: _AdderRegisters) -> List[Gate]:
    gates = [cnot(regs.pq(i), regs.gq(i - 1)) for i in range(1, regs.n)]
    gates.append(cnot(regs.pq(0), regs.g_sum[0]))
    gates.extend(reversed(_p_compute_gates(regs)))
    return gates


def _product(strategy: Strategy, c1: int, c2: int, target: int) -> Gate:
    if strategy is Strategy.LOGICAL_AND:
        return and_compute(c1, c2, target)
    return toffoli(c1, c2, target)


def _fanout(builder: CircuitBuilder, src: int, copies: int) -> Tuple[List[int], List[Gate]]:
    """Doubling CNOT tree, emitted: returns [src, copy_1, ...] and the copy gates."""
    holders = [src]
    gates: List[Gate] = []
    while len(holders) < copies + 1:
        for h in list(holders):
            if len(holders) == copies + 1:
                break
            c = builder.alloc(layer=builder.layer_after(h))
            gates.append(cnot(h, c))
            builder.emit(gates[-1])
            holders.append(c)
    return holders, gates


def _inverse_gates(gates: List[Gate]) -> List[Gate]:
    return [g.inverted() for g in reversed(gates)]


# -----------------------------
# Prefix lowering
# -----------------------------
def _version_tables(schedule: PrefixSchedule) -> Tuple[List[List[int]], List[int]]:
    """start_version[k-1][m] = last level < k updating m (0 if none); final version per column."""
    version = [0] * schedule.n
    starts: List[List[int]] = []
    for lv in schedule.levels:
        starts.append(list(version))
        for nd in lv.nodes:
            version[nd.column] = lv.index
    return starts, version


def _shadow_needs(schedule: PrefixSchedule, starts: List[List[int]], final: List[int]) -> Set[Tuple[int, int]]:
    """(column, version) pairs whose G must survive on a dedicated qubit."""
    need: Set[Tuple[int, int]] = set()
    for lv in reversed(schedule.levels):
        k = lv.index
        updated = {nd.column for nd in lv.nodes}
        start = starts[k - 1]
        for nd in lv.nodes:
            xc, lc = nd.column, nd.lo_column
            vx, vl = start[xc], start[lc]
            if lc in updated:
                need.add((lc, vl))
            if (xc, k) in need:
                need.add((xc, vx))
                if vl != final[lc]:
                    need.add((lc, vl))
    return need


_LEVEL_COUNTERS = ("p_copies", "g_copies", "shadows", "p_products", "uncompute_copies")


@dataclass
class _Combine:
    """One node's out-of-place work at a level, kept for its uncompute."""

    p_hi: int
    g_lo: int
    p_lo: Optional[int] = None
    prev: Optional[int] = None
    product: Optional[int] = None
    shadow: Optional[int] = None
    scratch: Optional[int] = None


class _PrefixLowering:
    def __init__(self, schedule: PrefixSchedule, strategy: Strategy, *, uncompute: bool, p_in_place: bool) -> None:
        self.schedule = schedule
        self.strategy = strategy
        self.uncompute = uncompute
        self.builder = CircuitBuilder()
        self.regs = _base_registers(self.builder, schedule.n, p_in_place)
        self.steps: Dict[str, Tuple[int, int]] = {}
        self.per_level: List[Dict[str, int]] = []
        self.seed_copies = 0
        self._combines: List[List[_Combine]] = []
        self._seeds: List[Tuple[int, int]] = []

    def fanout_summary(self) -> Dict[str, Any]:
        totals: Dict[str, Any] = {key: sum(lv[key] for lv in self.per_level) for key in _LEVEL_COUNTERS}
        totals["seed_copies"] = self.seed_copies
        totals["reused_ancillas"] = self.builder.reused_count
        totals["per_level"] = [dict(lv) for lv in self.per_level]
        return totals

    def _mark(self, name: str, start: int) -> None:
        self.steps[name] = (start, self.builder.gate_count)

    def run(self) -> Circuit:
        b = self.builder
        start = b.gate_count
        b.extend(_step1_gates(self.regs))
        self._mark("step1", start)

        start = b.gate_count
        self._step2()
        self._mark("step2", start)

        start = b.gate_count
        if self.uncompute:
            self._step3()
        self._mark("step3", start)

        start = b.gate_count
        b.extend(_step4_gates(self.regs))
        self._mark("step4", start)

        start = b.gate_count
        if self.uncompute:
            for m, q in self._seeds:
                b.emit(toffoli(self.regs.a[m], self.regs.b[m], q))
            b.release(*(q for _, q in self._seeds))
        self._mark("extra", start)
        return b.build()

    def _spread(
        self,
        operands: List[List[Optional[int]]],
        p_qubits: Set[int],
        counts: Dict[str, int],
        key: Optional[str] = None,
    ) -> Tuple[Dict[Tuple[int, int], int], List[Gate]]:
        """
        Give every node its own holder of each operand it reads.

        A qubit read by r nodes is fanned out to r-1 fresh copies; the copy
        gates are emitted here and returned so the caller can undo them.
        """
        readers: Dict[int, List[int]] = {}
        for i, qs in enumerate(operands):
            for q in qs:
                if q is not None and i not in readers.setdefault(q, []):
                    readers[q].append(i)

        assigned: Dict[Tuple[int, int], int] = {}
        copies: List[Gate] = []
        for q, users in readers.items():
            holders = [q]
            if len(users) > 1:
                holders, gates = _fanout(self.builder, q, len(users) - 1)
                copies.extend(gates)
                counts[key or ("p_copies" if q in p_qubits else "g_copies")] += len(gates)
            for i, h in zip(users, holders):
                assigned[(i, q)] = h
        return assigned, copies

    def _undo(self, copies: List[Gate]) -> None:
        self.builder.extend(_inverse_gates(copies))
        self.builder.release(*(g.target for g in copies))

    def _step2(self) -> None:
        b, regs, schedule = self.builder, self.regs, self.schedule
        starts, final = _version_tables(schedule)
        need = _shadow_needs(schedule, starts, final)

        p_holder: Dict[Tuple[int, int], int] = {(m, 0): regs.pq(m) for m in range(schedule.n)}
        shadow: Dict[Tuple[int, int], int] = {}
        for m in sorted(m for (m, v) in need if v == 0):
            q = b.alloc(layer=b.layer_after(regs.gq(m)))
            b.emit(cnot(regs.gq(m), q))
            shadow[(m, 0)] = q
            self._seeds.append((m, q))
        self.seed_copies = len(self._seeds)

        for lv in schedule.levels:
            k = lv.index
            start = starts[k - 1]
            counts = dict.fromkeys(_LEVEL_COUNTERS, 0)
            counts["level"] = k

            # a same-level read of an updated column always goes through a shadow
            combines: List[_Combine] = []
            for nd in lv.nodes:
                xc, lc = nd.column, nd.lo_column
                vx, vl = start[xc], start[lc]
                combines.append(
                    _Combine(
                        p_hi=p_holder[(xc, vx)],
                        g_lo=shadow.get((lc, vl), regs.gq(lc)),
                        p_lo=p_holder[(lc, vl)] if nd.needs_p_output else None,
                        prev=shadow[(xc, vx)] if (xc, k) in need else None,
                    )
                )

            assigned, copies = self._spread(
                [[c.p_hi, c.g_lo, c.p_lo, c.prev] for c in combines], set(p_holder.values()), counts
            )

            for i, (nd, c) in enumerate(zip(lv.nodes, combines)):
                b.emit(toffoli(assigned[(i, c.p_hi)], assigned[(i, c.g_lo)], regs.gq(nd.column)))

            for i, (nd, c) in enumerate(zip(lv.nodes, combines)):
                if c.p_lo is None:
                    continue
                c1, c2 = assigned[(i, c.p_hi)], assigned[(i, c.p_lo)]
                c.product = b.alloc(layer=b.layer_after(c1, c2))
                b.emit(_product(self.strategy, c1, c2, c.product))
                p_holder[(nd.column, k)] = c.product
                counts["p_products"] += 1

            for i, (nd, c) in enumerate(zip(lv.nodes, combines)):
                if c.prev is None:
                    continue
                p_hi, g_lo, prev = assigned[(i, c.p_hi)], assigned[(i, c.g_lo)], assigned[(i, c.prev)]
                layer = b.layer_after(p_hi, g_lo)
                c.shadow = b.alloc(layer=layer)
                if self.strategy is Strategy.LOGICAL_AND:
                    c.scratch = b.alloc(layer=layer)
                    b.extend([and_compute(p_hi, g_lo, c.scratch), cnot(c.scratch, c.shadow), cnot(prev, c.shadow)])
                else:
                    b.extend([toffoli(p_hi, g_lo, c.shadow), cnot(prev, c.shadow)])
                shadow[(nd.column, k)] = c.shadow
                counts["shadows"] += 1

            self._undo(copies)
            self._combines.append(combines)
            self.per_level.append(counts)

    def _step3(self) -> None:
        """Clear shadows and P products level by level, newest first."""
        b = self.builder
        for k in range(len(self._combines), 0, -1):
            combines = [c for c in self._combines[k - 1] if c.product is not None or c.shadow is not None]
            if not combines:
                continue
            operands = [
                [c.p_hi, c.p_lo if c.product is not None else None]
                + ([c.g_lo, c.prev] if c.shadow is not None else [])
                for c in combines
            ]
            assigned, copies = self._spread(operands, set(), self.per_level[k - 1], "uncompute_copies")

            for i in range(len(combines) - 1, -1, -1):
                c = combines[i]
                if c.shadow is None:
                    continue
                p_hi, g_lo, prev = assigned[(i, c.p_hi)], assigned[(i, c.g_lo)], assigned[(i, c.prev)]
                if c.scratch is not None:
                    b.extend([cnot(prev, c.shadow), cnot(c.scratch, c.shadow), and_uncompute(p_hi, g_lo, c.scratch)])
                else:
                    b.extend([toffoli(p_hi, g_lo, c.shadow), cnot(prev, c.shadow)])
            for i in range(len(combines) - 1, -1, -1):
                c = combines[i]
                if c.product is None:
                    continue
                c1, c2 = assigned[(i, c.p_hi)], assigned[(i, c.p_lo)]
                b.emit(_product(self.strategy, c1, c2, c.product).inverted())

            self._undo(copies)
            freed = [q for c in combines for q in (c.product, c.shadow, c.scratch) if q is not None]
            b.release(*freed)


def _lower(config: AdderConfig) -> Tuple[Circuit, _PrefixLowering]:
    schedule = build_schedule(config.tree, config.n)
    lowering = _PrefixLowering(
        schedule, config.strategy, uncompute=config.uncompute, p_in_place=config.p_in_place
    )
    return lowering.run(), lowering


# -----------------------------
# Step fragments
# -----------------------------
def synth_step1(n: int, *, p_in_place: bool = False) -> Circuit:
    """
    p_i = a_i XOR b_i and g_i = a_i AND b_i over the base layout (no ancilla).

    The p and g qubits must start at 0; `apply(..., strict=True)` rejects a
    dirty register with DirtyRegisterError.
    """
    require_power_of_two(n)
    builder = CircuitBuilder()
    regs = _base_registers(builder, n, p_in_place)
    builder.extend(_step1_gates(regs))
    return builder.build()


def synth_step4(n: int, *, p_in_place: bool = False) -> Circuit:
    """Sum onto the carry qubits and p uncompute; contains no Toffoli."""
    require_power_of_two(n)
    builder = CircuitBuilder()
    regs = _base_registers(builder, n, p_in_place)
    builder.extend(_step4_gates(regs))
    return builder.build()


def _fragment(schedule: PrefixSchedule, strategy: Strategy | str, step: str, p_in_place: bool) -> Circuit:
    lowering = _PrefixLowering(schedule, Strategy.parse(strategy), uncompute=True, p_in_place=p_in_place)
    circuit = lowering.run()
    start, stop = lowering.steps[step]
    return slice_gates(circuit, start, stop)


def synth_step2(schedule: PrefixSchedule, strategy: Strategy | str, *, p_in_place: bool = False) -> Circuit:
    return _fragment(schedule, strategy, "step2", p_in_place)


def synth_step3(schedule: PrefixSchedule, strategy: Strategy | str, *, p_in_place: bool = False) -> Circuit:
    return _fragment(schedule, strategy, "step3", p_in_place)


def synth_extra_step(schedule: PrefixSchedule, *, p_in_place: bool = False) -> Circuit:
    """Seed-copy cleanup for any tree; empty for trees without same-level reads."""
    return _fragment(schedule, Strategy.TOFFOLI_ONLY, "extra", p_in_place)


def synth_extra_step_ks(n: int, tree: TreeKind | str = TreeKind.KOGGE_STONE, *, p_in_place: bool = False) -> Circuit:
    tree = TreeKind.parse(tree)
    if tree is not TreeKind.KOGGE_STONE:
        raise ValueError(f"the Kogge-Stone extra step does not apply to {tree.value}")
    return synth_extra_step(build_schedule(tree, n), p_in_place=p_in_place)


# -----------------------------
# Builders
# -----------------------------
def build_adder(config: AdderConfig) -> AdderCircuit:
    if config.variant is not Variant.ADD:
        raise ValueError(f"build_adder expects variant 'add', got {config.variant.value!r}")
    circuit, lowering = _lower(config)
    logger.debug(
        "Built adder %s n=%d gates=%d qubits=%d", config.label, config.n, len(circuit), circuit.qubit_count
    )
    return AdderCircuit(
        circuit=circuit,
        config=config,
        steps=dict(lowering.steps),
        fanout_summary=lowering.fanout_summary(),
    )


def build_subtractor(config: AdderConfig) -> AdderCircuit:
    """sum = a - b + 2^n: complement a, add, complement a and the n+1 sum qubits."""
    if config.variant is not Variant.SUBTRACT:
        raise ValueError(f"build_subtractor expects variant 'subtract', got {config.variant.value!r}")
    inner = build_adder(config.model_copy(update={"variant": Variant.ADD}))
    a_reg = inner.input_a
    head = [x(q) for q in a_reg.qubits]
    tail = [x(q) for q in a_reg.qubits] + [x(q) for q in inner.sum_qubits]
    gates = tuple(head) + inner.circuit.gates + tuple(tail)
    offset = len(head)
    steps = {"complement_in": (0, offset)}
    steps.update({k: (s + offset, e + offset) for k, (s, e) in inner.steps.items()})
    steps["complement_out"] = (offset + len(inner.circuit), len(gates))
    circuit = Circuit(inner.circuit.layout, gates)
    return AdderCircuit(circuit=circuit, config=config, steps=steps, fanout_summary=dict(inner.fanout_summary))


def _emit_or_xor(c1: int, c2: int, target: int) -> List[Gate]:
    # target = c1 OR c2 = c1 ^ c2 ^ (c1 & c2); controls are never touched
    return [cnot(c1, target), cnot(c2, target), toffoli(c1, c2, target)]


def build_ling_adder(
    n: int,
    strategy: Strategy | str = Strategy.LOGICAL_AND,
    *,
    uncompute: bool = True,
    p_in_place: bool = False,
) -> AdderCircuit:
    """
    Ling pseudo-carry adder on the Kogge-Stone tree.

    H is the prefix over pairs (g_i, t_{i-1}) with t = a OR b; each node computes
    (G_hi OR P_hi.G_lo, P_hi.P_lo) out of place. From level 2 on, even and odd
    columns combine independently. Carries c_{i+1} = t_i . H_i are written onto
    the carry qubits, the whole scaffold is then reversed, and step 4 finishes.
    """
    config = AdderConfig(
        tree=TreeKind.KOGGE_STONE,
        n=n,
        strategy=strategy,
        uncompute=uncompute,
        variant=Variant.LING,
        p_in_place=p_in_place,
    )
    strategy = config.strategy
    schedule = build_schedule(TreeKind.KOGGE_STONE, n)
    b = CircuitBuilder()
    regs = _base_registers(b, n, p_in_place)
    steps: Dict[str, Tuple[int, int]] = {}
    fanout: Dict[str, Any] = {"copies": 0, "p_products": 0, "or_nodes": 0}

    scaffold: List[Gate] = []
    g0 = [b.alloc() for _ in range(n)]
    t = [b.alloc() for _ in range(n)]
    init = [_product(strategy, regs.a[i], regs.b[i], g0[i]) for i in range(n)]
    init += [x(q) for q in regs.a.qubits] + [x(q) for q in regs.b.qubits]
    init += [toffoli(regs.a[i], regs.b[i], t[i]) for i in range(n)]
    init += [x(q) for q in t]
    init += [x(q) for q in regs.a.qubits] + [x(q) for q in regs.b.qubits]
    start = b.gate_count
    b.extend(init)
    scaffold.extend(init)
    steps["ling_init"] = (start, b.gate_count)

    h_holder: Dict[Tuple[int, int], int] = {(m, 0): g0[m] for m in range(n)}
    p_holder: Dict[Tuple[int, int], int] = {(m, 0): t[m - 1] for m in range(1, n)}
    version = [0] * n
    start = b.gate_count
    for lv in schedule.levels:
        k = lv.index
        plans: List[Dict[str, Optional[int]]] = []
        for nd in lv.nodes:
            xc, lc = nd.column, nd.lo_column
            vx, vl = version[xc], version[lc]
            plans.append(
                {
                    "g_hi": h_holder[(xc, vx)],
                    "g_lo": h_holder[(lc, vl)],
                    "p_hi": p_holder[(xc, vx)] if (k > 1 or nd.needs_p_output) else None,
                    "p_lo": p_holder[(lc, vl)] if nd.needs_p_output else None,
                }
            )
        readers: Dict[int, List[int]] = {}
        for i, plan in enumerate(plans):
            for q in plan.values():
                if q is not None and i not in readers.setdefault(q, []):
                    readers[q].append(i)
        level_gates: List[Gate] = []
        assigned: Dict[Tuple[int, int], int] = {}
        for q, users in readers.items():
            holders = [q]
            if len(users) > 1:
                holders, gates = _fanout(b, q, len(users) - 1)
                level_gates.extend(gates)
                fanout["copies"] += len(gates)
            for i, h in zip(users, holders):
                assigned[(i, q)] = h

        products: List[Gate] = []
        ors: List[Gate] = []
        for i, (nd, plan) in enumerate(zip(lv.nodes, plans)):
            g_hi, g_lo = assigned[(i, plan["g_hi"])], assigned[(i, plan["g_lo"])]
            o = b.alloc()
            if k == 1:
                # g_{x-1} implies t_{x-1}, so the first level is a plain OR
                ors.extend(_emit_or_xor(g_hi, g_lo, o))
            else:
                m = b.alloc()
                products.append(_product(strategy, assigned[(i, plan["p_hi"])], g_lo, m))
                ors.extend(_emit_or_xor(g_hi, m, o))
            h_holder[(nd.column, k)] = o
            if nd.needs_p_output:
                r = b.alloc()
                products.append(
                    _product(strategy, assigned[(i, plan["p_hi"])], assigned[(i, plan["p_lo"])], r)
                )
                p_holder[(nd.column, k)] = r
                fanout["p_products"] += 1
            fanout["or_nodes"] += 1
        # copies are already emitted; they stay until the scaffold is reversed
        b.extend(products + ors)
        scaffold.extend(level_gates + products + ors)
        for nd in lv.nodes:
            version[nd.column] = k
    steps["ling_tree"] = (start, b.gate_count)

    start = b.gate_count
    for i in range(n):
        b.emit(toffoli(t[i], h_holder[(i, version[i])], regs.gq(i)))
    steps["carries"] = (start, b.gate_count)

    start = b.gate_count
    if uncompute:
        b.extend(_inverse_gates(scaffold))
    steps["uncompute"] = (start, b.gate_count)

    start = b.gate_count
    b.extend(_p_compute_gates(regs))
    steps["p_compute"] = (start, b.gate_count)

    start = b.gate_count
    b.extend(_step4_gates(regs))
    steps["step4"] = (start, b.gate_count)

    circuit = b.build()
    logger.debug("Built Ling adder n=%d gates=%d qubits=%d", n, len(circuit), circuit.qubit_count)
    return AdderCircuit(circuit=circuit, config=config, steps=steps, fanout_summary=fanout)


def build(config: AdderConfig) -> AdderCircuit:
    if config.variant is Variant.SUBTRACT:
        return build_subtractor(config)
    if config.variant is Variant.LING:
        return build_ling_adder(
            config.n, config.strategy, uncompute=config.uncompute, p_in_place=config.p_in_place
        )
    return build_adder(config)


__all__ = [
    "Strategy",
    "Variant",
    "AdderConfig",
    "AdderCircuit",
    "synth_step1",
    "synth_step2",
    "synth_step3",
    "synth_step4",
    "synth_extra_step",
    "synth_extra_step_ks",
    "build_adder",
    "build_subtractor",
    "build_ling_adder",
    "build",
]
