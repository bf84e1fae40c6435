# functions/core/modular.py
"""
Modular Adder — (a + b) mod N From Five Prefix-Tree Adder Blocks

Intent
- Compose the VBE-style modular adder out of two subtractors, one adder and
  the inverses of the two subtractors, with the modulus held in a register.
- Provide the "Set 0" block: scratch := N when the control flag is 1.

Block wiring (x, y, r are (n+1)-qubit results; z is n-qubit scratch)
1. B1: x = N - b + 2^n                 (subtractor, N on its a-input)
2. B2: y = a - x_sum + 2^n             (subtractor); y_top = [a + b >= N]
3. flag ^= y_top
4. Set 0 controlled on NOT flag:       z = N when a + b < N
5. B3: r = y_sum + z                   (adder); r_sum = (a + b) mod N
6. r_top ^= flag, then X r_top         (r_top was NOT flag)
7. Set 0 again (clears z), 8. flag ^= y_top
9. B2 inverse, B1 inverse              (clears y and x)

Requirements
- a, b < N < 2^n at simulation time; every block is built with uncompute on.
- Blocks share the p and ancilla registers of B1 (each block leaves them clean);
  both Set 0 blocks share one flag fan-out register.

Primary API
- build_set0_gate(n) -> Circuit
- build_modular_adder(config) -> ModularCircuit
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Tuple

from pydantic import BaseModel, ConfigDict, field_validator

from functions.core.adder import AdderCircuit, AdderConfig, Strategy, Variant, build_adder, build_subtractor
from functions.core.circuit import (
    Circuit,
    CircuitBuilder,
    Gate,
    Register,
    RegisterLayout,
    RegisterRole,
    cnot,
    compose,
    extend,
    inverse,
    toffoli,
    x,
)
from functions.core.prefix_tree import TreeKind, require_power_of_two
from functions.utils.logging import get_logger

logger = get_logger(__name__)


class ModularConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    tree: TreeKind = TreeKind.SKLANSKY
    n: int = 4
    strategy: Strategy = Strategy.LOGICAL_AND
    p_in_place: bool = False
    modulus_source: Literal["register"] = "register"

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

    def adder_config(self, variant: Variant) -> AdderConfig:
        return AdderConfig(
            tree=self.tree,
            n=self.n,
            strategy=self.strategy,
            uncompute=True,
            variant=variant,
            p_in_place=self.p_in_place,
        )

    @property
    def label(self) -> str:
        return f"{self.tree.value}+{self.strategy.short}+modular"


@dataclass(frozen=True)
class ModularCircuit:
    circuit: Circuit
    config: ModularConfig
    block_adder: AdderCircuit
    blocks: Dict[str, Tuple[int, int]] = field(default_factory=dict)

    def _reg(self, name: str) -> Register:
        return self.circuit.layout.register(name)

    @property
    def input_a(self) -> Register:
        return self._reg("a")

    @property
    def input_b(self) -> Register:
        return self._reg("b")

    @property
    def modulus(self) -> Register:
        return self._reg("N")

    @property
    def flag(self) -> int:
        return self._reg("flag")[0]

    @property
    def result_qubits(self) -> Tuple[int, ...]:
        return tuple(self._reg("r_sum").qubits) + tuple(self._reg("r_top").qubits)

    @property
    def work_qubits(self) -> Tuple[int, ...]:
        """Every qubit that must end at 0: all but the inputs and the low result bits."""
        keep = set(self.input_a.qubits) | set(self.input_b.qubits) | set(self.modulus.qubits)
        keep |= set(self._reg("r_sum").qubits)
        return tuple(q for q in range(self.circuit.qubit_count) if q not in keep)

    @property
    def set0_toffoli_count(self) -> int:
        return 2 * self.config.n


# -----------------------------
# Set 0
# -----------------------------
def build_set0_gate(n: int) -> Circuit:
    """z_i ^= flag & N_i for all i at Toffoli depth 1 (flag fanned out to n holders)."""
    require_power_of_two(n)
    builder = CircuitBuilder()
    flag = builder.add_register("flag", RegisterRole.SCRATCH, 1)
    modulus = builder.add_register("N", RegisterRole.MODULUS_N, n)
    z = builder.add_register("z", RegisterRole.SCRATCH, n)

    holders = [flag[0]]
    fan = []
    while len(holders) < n:
        for h in list(holders):
            if len(holders) == n:
                break
            c = builder.alloc()
            fan.append(cnot(h, c))
            holders.append(c)
    builder.extend(fan)
    builder.extend(toffoli(holders[i], modulus[i], z[i]) for i in range(n))
    builder.extend(reversed(fan))
    return builder.build()


# -----------------------------
# Composition
# -----------------------------
def _frame(n: int) -> Circuit:
    layout = RegisterLayout.from_widths(
        [
            ("a", RegisterRole.INPUT_A, n),
            ("b", RegisterRole.INPUT_B, n),
            ("N", RegisterRole.MODULUS_N, n),
            ("x_sum", RegisterRole.G_SUM, n),
            ("x_top", RegisterRole.CARRY_OUT, 1),
            ("y_sum", RegisterRole.G_SUM, n),
            ("y_top", RegisterRole.CARRY_OUT, 1),
            ("r_sum", RegisterRole.G_SUM, n),
            ("r_top", RegisterRole.CARRY_OUT, 1),
            ("z", RegisterRole.SCRATCH, n),
            ("flag", RegisterRole.SCRATCH, 1),
        ]
    )
    return Circuit(layout, ())


def _block_mapping(frame: Circuit, block: Circuit, io: Dict[str, str], shared: Dict[str, str]) -> Dict[str, str]:
    mapping = dict(io)
    for src, dst in shared.items():
        if src in block.layout and dst in frame.layout:
            mapping[src] = dst
    return mapping


def build_modular_adder(config: ModularConfig) -> ModularCircuit:
    n = config.n
    sub = build_subtractor(config.adder_config(Variant.SUBTRACT))
    add = build_adder(config.adder_config(Variant.ADD))
    set0 = build_set0_gate(n)

    shared = {"p": "p", "ancilla": "ancilla"}
    b1_io = {"a": "N", "b": "b", "g_sum": "x_sum", "carry_out": "x_top"}
    b2_io = {"a": "a", "b": "x_sum", "g_sum": "y_sum", "carry_out": "y_top"}
    b3_io = {"a": "y_sum", "b": "z", "g_sum": "r_sum", "carry_out": "r_top"}
    set0_io = {"flag": "flag", "N": "N", "z": "z"}

    c = _frame(n)
    blocks: Dict[str, Tuple[int, int]] = {}

    def mark(name: str, start: int) -> None:
        blocks[name] = (start, len(c.gates))

    def block(name: str, part: Circuit, io: Dict[str, str], share: Dict[str, str], prefix: str) -> None:
        nonlocal c
        start = len(c.gates)
        c = compose(c, part, _block_mapping(c, part, io, share), prefix=prefix)
        mark(name, start)

    def plumbing(name: str, gates: List[Gate]) -> None:
        nonlocal c
        start = len(c.gates)
        c = extend(c, gates)
        mark(name, start)

    def qubit(name: str) -> int:
        return c.layout.register(name)[0]

    block("b1", sub.circuit, b1_io, shared, "b1_")
    block("b2", sub.circuit, b2_io, shared, "b2_")
    plumbing("flag_set", [cnot(qubit("y_top"), qubit("flag"))])

    plumbing("set0_open", [x(qubit("flag"))])
    block("set0", set0, set0_io, {}, "set0_")
    plumbing("set0_close", [x(qubit("flag"))])

    block("b3", add.circuit, b3_io, shared, "b3_")
    plumbing("result_top", [cnot(qubit("flag"), qubit("r_top")), x(qubit("r_top"))])

    plumbing("unset0_open", [x(qubit("flag"))])
    block("unset0", set0, set0_io, {"ancilla": "set0_ancilla"}, "set0_")
    plumbing("unset0_close", [x(qubit("flag"))])
    plumbing("flag_reset", [cnot(qubit("y_top"), qubit("flag"))])

    block("b2_inverse", inverse(sub.circuit), b2_io, shared, "b2_")
    block("b1_inverse", inverse(sub.circuit), b1_io, shared, "b1_")

    problems = c.layout.validate()
    if problems:
        raise ValueError("; ".join(problems))
    logger.debug("Built modular adder %s n=%d gates=%d qubits=%d", config.label, n, len(c), c.qubit_count)
    return ModularCircuit(circuit=c, config=config, block_adder=add, blocks=blocks)


__all__ = ["ModularConfig", "ModularCircuit", "build_set0_gate", "build_modular_adder"]
