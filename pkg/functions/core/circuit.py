# functions/core/circuit.py
"""
Reversible Circuit IR — Qubit Layout, Gate List, Composition, Inversion

Intent
- Provide the single intermediate representation shared by every synthesizer,
  the simulator, the analyzer and the text codec:
  - `Gate`: one reversible primitive (X / CNOT / TOFFOLI / AND_COMPUTE / AND_UNCOMPUTE)
  - `Register` / `RegisterLayout`: named, role-tagged, contiguous qubit spans
  - `Circuit`: immutable layout + ordered gate tuple
- Keep circuits immutable after construction; synthesis uses `CircuitBuilder`
  (mutable allocator) and freezes the result once.

What this module guarantees
- Gate arity is enforced at construction (X: 0 controls, CNOT: 1, others: 2).
- Operands of a gate are pairwise distinct and non-negative.
- `append` / `extend` reject out-of-range qubits.
- `inverse` reverses the gate list and swaps AND_COMPUTE <-> AND_UNCOMPUTE.
- `compose` maps registers of `b` onto registers of `a` by name; unmapped
  registers of `b` get fresh qubits appended after `a`.

Primary API
- append(circuit, gate) -> Circuit
- extend(circuit, gates) -> Circuit
- compose(a, b, mapping=None, *, prefix="b_") -> Circuit
- inverse(circuit) -> Circuit
- slice_gates(circuit, start, stop) -> Circuit
- validate_circuit(circuit, *, require_closed_and=False) -> list[str]
- check_and_pairing(circuit, *, require_closed=False) -> list[str]

Design notes
- Layering is never stored; depth lives in functions.core.analyze.
- Role conflict in `compose` means mapping an ancilla register onto a
  non-ancilla register (or the reverse). Ancilla-to-ancilla is allowed so that
  composed blocks can share clean scratch.
- Inputs (roles input_a, input_b, modulus_n) are the only qubits that may start
  nonzero; everything else is declared zero-initialised.

External dependencies
- Python stdlib only (dataclasses, enum); validated by the rest of the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


# -----------------------------
# Value types
# -----------------------------
class GateKind(str, Enum):
    X = "x"
    CNOT = "cx"
    TOFFOLI = "ccx"
    AND_COMPUTE = "and"
    AND_UNCOMPUTE = "unand"

    @property
    def arity(self) -> int:
        """Number of control qubits this kind takes."""
        if self is GateKind.X:
            return 0
        if self is GateKind.CNOT:
            return 1
        return 2


class RegisterRole(str, Enum):
    INPUT_A = "input_a"
    INPUT_B = "input_b"
    P_WORK = "p_work"
    G_SUM = "g_sum"
    CARRY_OUT = "carry_out"
    ANCILLA = "ancilla"
    MODULUS_N = "modulus_n"
    SCRATCH = "scratch"


INPUT_ROLES = frozenset({RegisterRole.INPUT_A, RegisterRole.INPUT_B, RegisterRole.MODULUS_N})

_INVERSE_KIND = {
    GateKind.AND_COMPUTE: GateKind.AND_UNCOMPUTE,
    GateKind.AND_UNCOMPUTE: GateKind.AND_COMPUTE,
}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    controls: Tuple[int, ...]
    target: int

    def __post_init__(self) -> None:
        if len(self.controls) != self.kind.arity:
            raise ValueError(
                f"{self.kind.name} takes {self.kind.arity} control(s); got {len(self.controls)}"
            )
        ops = self.qubits
        if any(q < 0 for q in ops):
            raise ValueError(f"negative qubit index in {self}")
        if len(set(ops)) != len(ops):
            raise ValueError(f"duplicate operand in {self.kind.name}{ops}")

    @property
    def qubits(self) -> Tuple[int, ...]:
        return tuple(self.controls) + (self.target,)

    def inverted(self) -> "Gate":
        return Gate(_INVERSE_KIND.get(self.kind, self.kind), self.controls, self.target)

    def remapped(self, index_map: Dict[int, int]) -> "Gate":
        return Gate(self.kind, tuple(index_map[c] for c in self.controls), index_map[self.target])

    def __str__(self) -> str:
        return " ".join([self.kind.value, *(str(q) for q in self.qubits)])


def x(target: int) -> Gate:
    return Gate(GateKind.X, (), target)


def cnot(control: int, target: int) -> Gate:
    return Gate(GateKind.CNOT, (control,), target)


def toffoli(c1: int, c2: int, target: int) -> Gate:
    return Gate(GateKind.TOFFOLI, (c1, c2), target)


def and_compute(c1: int, c2: int, target: int) -> Gate:
    return Gate(GateKind.AND_COMPUTE, (c1, c2), target)


def and_uncompute(c1: int, c2: int, target: int) -> Gate:
    return Gate(GateKind.AND_UNCOMPUTE, (c1, c2), target)


@dataclass(frozen=True)
class Register:
    name: str
    role: RegisterRole
    start: int
    width: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.width < 0:
            raise ValueError(f"register {self.name!r} must have non-negative start/width")

    @property
    def stop(self) -> int:
        return self.start + self.width

    @property
    def qubits(self) -> range:
        return range(self.start, self.stop)

    def __getitem__(self, i: int) -> int:
        if not -self.width <= i < self.width:
            raise IndexError(f"{self.name}[{i}] out of range (width {self.width})")
        return self.start + (i % self.width)

    def __len__(self) -> int:
        return self.width


@dataclass(frozen=True)
class RegisterLayout:
    registers: Tuple[Register, ...] = ()

    @classmethod
    def from_widths(cls, specs: Iterable[Tuple[str, RegisterRole, int]]) -> "RegisterLayout":
        """Lay out registers contiguously in the given order."""
        regs: List[Register] = []
        start = 0
        for name, role, width in specs:
            regs.append(Register(name, RegisterRole(role), start, int(width)))
            start += int(width)
        layout = cls(tuple(regs))
        problems = layout.validate()
        if problems:
            raise ValueError("; ".join(problems))
        return layout

    @property
    def qubit_count(self) -> int:
        return max((r.stop for r in self.registers), default=0)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(r.name for r in self.registers)

    def __contains__(self, name: object) -> bool:
        return any(r.name == name for r in self.registers)

    def register(self, name: str) -> Register:
        for r in self.registers:
            if r.name == name:
                return r
        raise ValueError(f"unknown register: {name!r}")

    def by_role(self, role: RegisterRole) -> Tuple[Register, ...]:
        return tuple(r for r in self.registers if r.role is role)

    def validate(self) -> List[str]:
        """Spans must be disjoint, uniquely named and cover [0, qubit_count)."""
        problems: List[str] = []
        seen = set()
        for r in self.registers:
            if r.name in seen:
                problems.append(f"duplicate register name {r.name!r}")
            seen.add(r.name)
        cursor = 0
        for r in sorted(self.registers, key=lambda r: (r.start, r.width)):
            if r.start < cursor:
                problems.append(f"register {r.name!r} overlaps a previous span")
            elif r.start > cursor:
                problems.append(f"qubits [{cursor}, {r.start}) are not covered by any register")
            cursor = max(cursor, r.stop)
        return problems


@dataclass(frozen=True)
class Circuit:
    layout: RegisterLayout
    gates: Tuple[Gate, ...] = field(default_factory=tuple)

    @property
    def qubit_count(self) -> int:
        return self.layout.qubit_count

    def __len__(self) -> int:
        return len(self.gates)

    def zero_initialized_qubits(self) -> Tuple[int, ...]:
        """Every qubit outside the input registers starts at 0."""
        return tuple(
            q
            for r in self.layout.registers
            if r.role not in INPUT_ROLES
            for q in r.qubits
        )


# -----------------------------
# Builder (mutable, synthesis only)
# -----------------------------
class CircuitBuilder:
    """
    Allocate registers in order, then grow a trailing `ancilla` register on demand.

    Registers cannot be added once ancilla allocation has started, which keeps
    the "inputs first, ancilla last" layout.

    The builder tracks the ASAP ready layer of every qubit as gates are
    emitted. Released ancillas go to a free pool; `alloc(layer=k)` hands one
    back only if it is idle by layer k, so reuse never delays the gate that
    will touch it.
    """

    def __init__(self, ancilla_name: str = "ancilla") -> None:
        self._registers: List[Register] = []
        self._gates: List[Gate] = []
        self._cursor = 0
        self._ancilla_name = ancilla_name
        self._ancilla_start: Optional[int] = None
        self._ancilla_width = 0
        self._ready: List[int] = []
        self._free: List[int] = []
        self._reused = 0

    @property
    def gate_count(self) -> int:
        return len(self._gates)

    @property
    def ancilla_count(self) -> int:
        return self._ancilla_width

    @property
    def reused_count(self) -> int:
        """Allocations served from the free pool."""
        return self._reused

    def add_register(self, name: str, role: RegisterRole, width: int) -> Register:
        if self._ancilla_start is not None:
            raise ValueError("cannot add registers after ancilla allocation started")
        reg = Register(name, role, self._cursor, width)
        self._registers.append(reg)
        self._cursor += width
        self._ready.extend([0] * width)
        return reg

    def layer_after(self, *qubits: int) -> int:
        """ASAP layer a gate on `qubits` would land in if emitted now."""
        return max((self._ready[q] for q in qubits), default=0)

    def alloc(self, layer: Optional[int] = None) -> int:
        """
        Zeroed ancilla qubit.

        With `layer` set, a released qubit whose last gate ends by that layer is
        reused (the busiest such qubit, ties to the lowest index); otherwise a
        fresh qubit is appended.
        """
        if layer is not None:
            best: Optional[int] = None
            for q in self._free:
                r = self._ready[q]
                if r <= layer and (best is None or r > self._ready[best] or (r == self._ready[best] and q < best)):
                    best = q
            if best is not None:
                self._free.remove(best)
                self._reused += 1
                return best
        if self._ancilla_start is None:
            self._ancilla_start = self._cursor
        q = self._ancilla_start + self._ancilla_width
        self._ancilla_width += 1
        self._ready.append(0)
        return q

    def release(self, *qubits: int) -> None:
        """Return ancillas the caller has already restored to 0."""
        for q in qubits:
            if self._ancilla_start is None or q < self._ancilla_start or q in self._free:
                raise ValueError(f"qubit {q} is not an allocated ancilla")
            self._free.append(q)

    def emit(self, gate: Gate) -> None:
        _require_in_range(len(self._ready), [gate], offset=len(self._gates))
        layer = self.layer_after(*gate.qubits)
        for q in gate.qubits:
            self._ready[q] = layer + 1
        self._gates.append(gate)

    def extend(self, gates: Iterable[Gate]) -> None:
        for g in gates:
            self.emit(g)

    def gates_since(self, mark: int) -> List[Gate]:
        return list(self._gates[mark:])

    def build(self) -> Circuit:
        regs = list(self._registers)
        if self._ancilla_width:
            regs.append(Register(self._ancilla_name, RegisterRole.ANCILLA, self._ancilla_start, self._ancilla_width))
        layout = RegisterLayout(tuple(regs))
        circuit = Circuit(layout, tuple(self._gates))
        _require_in_range(circuit.qubit_count, circuit.gates)
        return circuit


# -----------------------------
# Operations
# -----------------------------
def _require_in_range(qubit_count: int, gates: Sequence[Gate], offset: int = 0) -> None:
    for i, g in enumerate(gates):
        for q in g.qubits:
            if q >= qubit_count:
                raise ValueError(
                    f"gate {offset + i} ({g}) references qubit {q}, out of range for {qubit_count} qubits"
                )


def append(circuit: Circuit, gate: Gate) -> Circuit:
    _require_in_range(circuit.qubit_count, [gate], offset=len(circuit.gates))
    return Circuit(circuit.layout, circuit.gates + (gate,))


def extend(circuit: Circuit, gates: Iterable[Gate]) -> Circuit:
    new = tuple(gates)
    _require_in_range(circuit.qubit_count, new, offset=len(circuit.gates))
    return Circuit(circuit.layout, circuit.gates + new)


def inverse(circuit: Circuit) -> Circuit:
    return Circuit(circuit.layout, tuple(g.inverted() for g in reversed(circuit.gates)))


def slice_gates(circuit: Circuit, start: int, stop: int) -> Circuit:
    """Fragment of `circuit` over the same layout."""
    return Circuit(circuit.layout, circuit.gates[start:stop])


def identity_mapping(circuit: Circuit) -> Dict[str, str]:
    return {name: name for name in circuit.layout.names}


def compose(
    a: Circuit,
    b: Circuit,
    mapping: Optional[Dict[str, str]] = None,
    *,
    prefix: str = "b_",
) -> Circuit:
    """
    Gates of `a` followed by the gates of `b` remapped onto `a`'s qubits.

    `mapping` sends b-register names to a-register names. Unmapped b registers
    are appended as fresh registers (renamed with `prefix` on name collision).
    """
    mapping = dict(mapping or {})
    for b_name, a_name in mapping.items():
        if b_name not in b.layout:
            raise ValueError(f"mapping source {b_name!r} is not a register of the second circuit")
        if a_name not in a.layout:
            raise ValueError(f"mapping target {a_name!r} is not a register of the first circuit")
    targets = list(mapping.values())
    if len(set(targets)) != len(targets):
        raise ValueError("two registers mapped onto the same target register")

    registers = list(a.layout.registers)
    taken = set(a.layout.names)
    index_map: Dict[int, int] = {}
    cursor = a.qubit_count

    for reg in b.layout.registers:
        if reg.name in mapping:
            dst = a.layout.register(mapping[reg.name])
            if dst.width != reg.width:
                raise ValueError(
                    f"width mismatch: {reg.name}[{reg.width}] mapped onto {dst.name}[{dst.width}]"
                )
            if (reg.role is RegisterRole.ANCILLA) != (dst.role is RegisterRole.ANCILLA):
                raise ValueError(
                    f"role conflict: {reg.name} ({reg.role.value}) mapped onto {dst.name} ({dst.role.value})"
                )
            for i in range(reg.width):
                index_map[reg.start + i] = dst.start + i
            continue

        name = reg.name
        while name in taken:
            name = prefix + name
        taken.add(name)
        registers.append(Register(name, reg.role, cursor, reg.width))
        for i in range(reg.width):
            index_map[reg.start + i] = cursor + i
        cursor += reg.width

    layout = RegisterLayout(tuple(registers))
    return Circuit(layout, a.gates + tuple(g.remapped(index_map) for g in b.gates))


def check_and_pairing(circuit: Circuit, *, require_closed: bool = False) -> List[str]:
    """
    AND_COMPUTE targets must not be targeted again before their AND_UNCOMPUTE.

    With `require_closed`, every AND_COMPUTE must also be matched by the end.
    """
    problems: List[str] = []
    open_at: Dict[int, int] = {}
    for i, g in enumerate(circuit.gates):
        t = g.target
        if g.kind is GateKind.AND_COMPUTE:
            if t in open_at:
                problems.append(f"gate {i}: AND_COMPUTE on qubit {t} already open since gate {open_at[t]}")
            open_at[t] = i
        elif g.kind is GateKind.AND_UNCOMPUTE:
            if t not in open_at:
                problems.append(f"gate {i}: AND_UNCOMPUTE on qubit {t} without matching AND_COMPUTE")
            else:
                del open_at[t]
        elif t in open_at:
            problems.append(f"gate {i}: qubit {t} targeted before AND_UNCOMPUTE of gate {open_at[t]}")
    if require_closed:
        for t, i in sorted(open_at.items(), key=lambda kv: kv[1]):
            problems.append(f"gate {i}: AND_COMPUTE on qubit {t} never uncomputed")
    return problems


def validate_circuit(circuit: Circuit, *, require_closed_and: bool = False) -> List[str]:
    """Structural diagnostics; an empty list means the circuit is well formed."""
    problems = list(circuit.layout.validate())
    n = circuit.qubit_count
    for i, g in enumerate(circuit.gates):
        bad = [q for q in g.qubits if q >= n]
        if bad:
            problems.append(f"gate {i}: qubit(s) {bad} out of range for {n} qubits")
    problems.extend(check_and_pairing(circuit, require_closed=require_closed_and))
    return problems


__all__ = [
    "GateKind",
    "RegisterRole",
    "INPUT_ROLES",
    "Gate",
    "x",
    "cnot",
    "toffoli",
    "and_compute",
    "and_uncompute",
    "Register",
    "RegisterLayout",
    "Circuit",
    "CircuitBuilder",
    "append",
    "extend",
    "inverse",
    "slice_gates",
    "identity_mapping",
    "compose",
    "check_and_pairing",
    "validate_circuit",
]
