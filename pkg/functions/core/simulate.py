# functions/core/simulate.py
"""
Basis-State Simulator — Exact Oracle for Reversible Circuits

Intent
- Apply a Circuit to computational basis states, one at a time (`apply`) or as
  a numpy batch (`apply_batch`, shape (qubit_count, batch), dtype bool).
- Pack integer operands into adder / modular layouts, run, unpack the result
  and report the side conditions (inputs preserved, ancilla clean).

Gate semantics
- X flips the target; CNOT: t ^= c; TOFFOLI: t ^= c1 & c2.
- AND_COMPUTE: target must arrive at 0, then t := c1 & c2.
- AND_UNCOMPUTE: target must arrive equal to c1 & c2, then t := 0.
- A violated AND precondition raises AndPreconditionError naming the gate index
  (and the first failing batch column); synthesized circuits never trigger it.
- With strict=True, every qubit outside the input registers must arrive at 0;
  a set bit raises DirtyRegisterError naming the register (e.g. a dirty p or
  g_sum register handed to the step-1 fragment).

Notes
- Integer packing uses int64 up to 62-bit registers and Python ints beyond,
  so n = 64 adders (65-bit sums) round-trip exactly.
- `apply_batch` never mutates its input; circuits are shared read-only, so
  batches can be fanned out across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from functions.core.circuit import Circuit, GateKind, RegisterRole

if TYPE_CHECKING:
    from functions.core.adder import AdderCircuit
    from functions.core.modular import ModularCircuit

IntArray = Union[np.ndarray, Sequence[int]]

_INT64_MAX_BITS = 62
_INPUT_ROLES = (RegisterRole.INPUT_A, RegisterRole.INPUT_B, RegisterRole.MODULUS_N)


class AndPreconditionError(RuntimeError):
    def __init__(self, gate_index: int, message: str, column: Optional[int] = None) -> None:
        where = f" (batch column {column})" if column is not None else ""
        super().__init__(f"gate {gate_index}: {message}{where}")
        self.gate_index = gate_index
        self.column = column


class DirtyRegisterError(ValueError):
    def __init__(self, register: str, qubit: int, column: int) -> None:
        super().__init__(f"dirty {register} register: qubit {qubit} is not 0 (batch column {column})")
        self.register = register
        self.qubit = qubit
        self.column = column


# -----------------------------
# Basis states
# -----------------------------
@dataclass(frozen=True)
class BasisState:
    bits: Tuple[int, ...]

    def __post_init__(self) -> None:
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("basis state bits must be 0 or 1")

    @classmethod
    def zeros(cls, width: int) -> "BasisState":
        return cls((0,) * width)

    @classmethod
    def from_int(cls, value: int, width: int) -> "BasisState":
        """Little-endian: bit i of `value` sits on qubit i."""
        if value < 0 or value >= (1 << width):
            raise ValueError(f"value {value} does not fit in {width} qubits")
        return cls(tuple((value >> i) & 1 for i in range(width)))

    @property
    def width(self) -> int:
        return len(self.bits)

    def to_int(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    def __getitem__(self, i: int) -> int:
        return self.bits[i]


# -----------------------------
# Kernels
# -----------------------------
def _first_column(mask: np.ndarray) -> int:
    return int(np.flatnonzero(mask)[0])


def _require_clean(circuit: Circuit, states: np.ndarray) -> None:
    for reg in circuit.layout.registers:
        if reg.role in _INPUT_ROLES or not reg.width:
            continue
        dirty = states[list(reg.qubits)]
        if dirty.any():
            row, column = np.argwhere(dirty)[0]
            raise DirtyRegisterError(reg.name, reg.start + int(row), int(column))


def apply_batch(circuit: Circuit, states: np.ndarray, *, strict: bool = False) -> np.ndarray:
    """Run every column of `states` (qubit_count x batch, bool) through the circuit."""
    states = np.asarray(states, dtype=bool)
    if states.ndim != 2 or states.shape[0] != circuit.qubit_count:
        raise ValueError(
            f"state batch of shape {states.shape} does not match {circuit.qubit_count} qubits"
        )
    if strict:
        _require_clean(circuit, states)
    s = states.copy()
    for idx, g in enumerate(circuit.gates):
        t = g.target
        kind = g.kind
        if kind is GateKind.X:
            np.logical_not(s[t], out=s[t])
        elif kind is GateKind.CNOT:
            s[t] ^= s[g.controls[0]]
        elif kind is GateKind.TOFFOLI:
            s[t] ^= s[g.controls[0]] & s[g.controls[1]]
        elif kind is GateKind.AND_COMPUTE:
            if s[t].any():
                raise AndPreconditionError(idx, f"AND_COMPUTE target {t} is not 0", _first_column(s[t]))
            s[t] = s[g.controls[0]] & s[g.controls[1]]
        else:
            bad = s[t] != (s[g.controls[0]] & s[g.controls[1]])
            if bad.any():
                raise AndPreconditionError(
                    idx, f"AND_UNCOMPUTE target {t} does not equal the AND of its controls", _first_column(bad)
                )
            s[t] = False
    return s


def apply(circuit: Circuit, state: BasisState, *, strict: bool = False) -> BasisState:
    if state.width != circuit.qubit_count:
        raise ValueError(f"state width {state.width} does not match {circuit.qubit_count} qubits")
    column = np.array(state.bits, dtype=bool).reshape(-1, 1)
    out = apply_batch(circuit, column, strict=strict)
    return BasisState(tuple(int(b) for b in out[:, 0]))


# -----------------------------
# Integer packing
# -----------------------------
def _as_values(values: IntArray, width: int) -> np.ndarray:
    dtype = np.int64 if width <= _INT64_MAX_BITS else object
    arr = np.asarray(values, dtype=dtype).reshape(-1)
    if arr.size and (min(arr) < 0 or max(arr) >= (1 << width)):
        raise ValueError(f"operand out of range: values must lie in [0, 2^{width})")
    return arr


def pack_bits(values: IntArray, width: int) -> np.ndarray:
    """(width, batch) bool rows, row i = bit i of each value."""
    arr = _as_values(values, width)
    if width <= _INT64_MAX_BITS:
        shifts = np.arange(width, dtype=np.int64).reshape(-1, 1)
        return ((arr.reshape(1, -1) >> shifts) & 1).astype(bool)
    return np.array([[(int(v) >> i) & 1 for v in arr] for i in range(width)], dtype=bool).reshape(width, -1)


def unpack_bits(rows: np.ndarray) -> np.ndarray:
    """Inverse of pack_bits over the given qubit rows."""
    width = rows.shape[0]
    if width <= _INT64_MAX_BITS:
        weights = (np.int64(1) << np.arange(width, dtype=np.int64)).reshape(-1, 1)
        return (rows.astype(np.int64) * weights).sum(axis=0)
    values = [sum(1 << i for i in range(width) if rows[i, j]) for j in range(rows.shape[1])]
    return np.array(values, dtype=object)


def _load(circuit: Circuit, registers: Sequence[Tuple[Sequence[int], IntArray]], batch: int) -> np.ndarray:
    states = np.zeros((circuit.qubit_count, batch), dtype=bool)
    for qubits, values in registers:
        states[list(qubits)] = pack_bits(values, len(qubits))
    return states


def _clean(final: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
    if not len(qubits):
        return np.ones(final.shape[1], dtype=bool)
    return ~final[list(qubits)].any(axis=0)


def _same(final: np.ndarray, initial: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
    q = list(qubits)
    return (final[q] == initial[q]).all(axis=0)


# -----------------------------
# Adders
# -----------------------------
class AdderRun(NamedTuple):
    sum: int
    inputs_preserved: bool
    ancilla_clean: bool


class AdderBatchRun(NamedTuple):
    sums: np.ndarray
    inputs_preserved: np.ndarray
    ancilla_clean: np.ndarray


def run_adder_batch(adder: "AdderCircuit", a_values: IntArray, b_values: IntArray) -> AdderBatchRun:
    a_reg, b_reg = adder.input_a, adder.input_b
    a_arr = _as_values(a_values, a_reg.width)
    b_arr = _as_values(b_values, b_reg.width)
    if a_arr.shape != b_arr.shape:
        raise ValueError("a and b batches must have the same length")
    initial = _load(adder.circuit, [(a_reg.qubits, a_arr), (b_reg.qubits, b_arr)], a_arr.size)
    final = apply_batch(adder.circuit, initial)
    inputs = list(a_reg.qubits) + list(b_reg.qubits)
    return AdderBatchRun(
        sums=unpack_bits(final[list(adder.sum_qubits)]),
        inputs_preserved=_same(final, initial, inputs),
        ancilla_clean=_clean(final, adder.ancilla_qubits),
    )


def run_adder(adder: "AdderCircuit", a: int, b: int) -> AdderRun:
    res = run_adder_batch(adder, [a], [b])
    return AdderRun(int(res.sums[0]), bool(res.inputs_preserved[0]), bool(res.ancilla_clean[0]))


# -----------------------------
# Modular adders
# -----------------------------
class ModularRun(NamedTuple):
    result: int
    inputs_preserved: bool
    ancilla_clean: bool


class ModularBatchRun(NamedTuple):
    results: np.ndarray
    inputs_preserved: np.ndarray
    ancilla_clean: np.ndarray


def run_modular_batch(
    mod: "ModularCircuit", a_values: IntArray, b_values: IntArray, modulus: Union[int, IntArray]
) -> ModularBatchRun:
    layout = mod.circuit.layout
    a_reg, b_reg, n_reg = layout.register("a"), layout.register("b"), layout.register("N")
    a_arr = _as_values(a_values, a_reg.width)
    b_arr = _as_values(b_values, b_reg.width)
    if np.ndim(modulus) == 0:
        n_arr = _as_values(np.full(a_arr.size, int(modulus)), n_reg.width)
    else:
        n_arr = _as_values(modulus, n_reg.width)
    if not (a_arr.shape == b_arr.shape == n_arr.shape):
        raise ValueError("a, b and N batches must have the same length")
    if (a_arr >= n_arr).any() or (b_arr >= n_arr).any():
        raise ValueError("operand out of range: modular addition requires a, b < N")

    initial = _load(
        mod.circuit,
        [(a_reg.qubits, a_arr), (b_reg.qubits, b_arr), (n_reg.qubits, n_arr)],
        a_arr.size,
    )
    final = apply_batch(mod.circuit, initial)
    inputs = [q for r in layout.registers if r.role in _INPUT_ROLES for q in r.qubits]
    return ModularBatchRun(
        results=unpack_bits(final[list(mod.result_qubits)]),
        inputs_preserved=_same(final, initial, inputs),
        ancilla_clean=_clean(final, mod.work_qubits),
    )


def run_modular(mod: "ModularCircuit", a: int, b: int, modulus: int) -> ModularRun:
    res = run_modular_batch(mod, [a], [b], modulus)
    return ModularRun(int(res.results[0]), bool(res.inputs_preserved[0]), bool(res.ancilla_clean[0]))


def random_operands(n: int, trials: int, seed: int, *, upper: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Seeded uniform operand pairs in [0, upper) (default 2^n)."""
    if trials <= 0:
        raise ValueError("trials must be > 0")
    upper = (1 << n) if upper is None else upper
    rng = np.random.default_rng(seed)
    if n <= _INT64_MAX_BITS:
        return rng.integers(0, upper, size=trials, dtype=np.int64), rng.integers(0, upper, size=trials, dtype=np.int64)
    # wide operands: draw 32-bit limbs
    limbs = (n + 31) // 32

    def draw() -> np.ndarray:
        raw = rng.integers(0, 1 << 32, size=(trials, limbs), dtype=np.int64)
        vals = [sum(int(v) << (32 * j) for j, v in enumerate(row)) % upper for row in raw]
        return np.array(vals, dtype=object)

    return draw(), draw()


__all__ = [
    "AndPreconditionError",
    "DirtyRegisterError",
    "BasisState",
    "apply",
    "apply_batch",
    "pack_bits",
    "unpack_bits",
    "AdderRun",
    "AdderBatchRun",
    "run_adder",
    "run_adder_batch",
    "ModularRun",
    "ModularBatchRun",
    "run_modular",
    "run_modular_batch",
    "random_operands",
]
