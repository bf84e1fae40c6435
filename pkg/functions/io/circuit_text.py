# functions/io/circuit_text.py
"""
Circuit Text Codec — Lossless Line Format + Lowered QASM Export

Format (one statement per line, `#` starts a comment, blank lines ignored)
    qubits <k>
    reg <name> <role> <start> <width>
    x <t> | cx <c> <t> | ccx <c1> <c2> <t> | and <c1> <c2> <t> | unand <c1> <c2> <t>

- `qubits` must come first; register lines precede gate lines.
- Registers must cover [0, k) exactly once. A file without register lines gets
  a single ancilla register over all k qubits.
- import_circuit(export_circuit(c)) == c.

QASM
- export_qasm writes OpenQASM 2.0 over one `q` register; AND/UNAND are lowered
  to ccx (equal on basis states), so the export is lossy by design of the gate set.

Errors
- CircuitParseError (a ValueError) carries `lineno`; messages start with "line <k>: ".
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Optional, Tuple

from functions.core.circuit import Circuit, Gate, GateKind, Register, RegisterLayout, RegisterRole
from functions.io.writers import ensure_parent_dir
from functions.utils.logging import get_logger

logger = get_logger(__name__)

_KINDS = {k.value: k for k in GateKind}
_ROLES = {r.value: r for r in RegisterRole}


class CircuitParseError(ValueError):
    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _default_registers(qubit_count: int) -> Tuple[Register, ...]:
    return (Register("ancilla", RegisterRole.ANCILLA, 0, qubit_count),) if qubit_count else ()


def export_circuit(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.qubit_count}"]
    # the default single-ancilla layout is implied by a header without register lines
    if circuit.layout.registers != _default_registers(circuit.qubit_count):
        lines += [f"reg {r.name} {r.role.value} {r.start} {r.width}" for r in circuit.layout.registers]
    lines += [str(g) for g in circuit.gates]
    return "\n".join(lines) + "\n"


def _int(token: str, lineno: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError as e:
        raise CircuitParseError(lineno, f"{what} must be an integer, got {token!r}") from e
    if value < 0:
        raise CircuitParseError(lineno, f"{what} must be non-negative, got {value}")
    return value


def import_circuit(text: str) -> Circuit:
    qubit_count: Optional[int] = None
    registers: List[Register] = []
    gates: List[Gate] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()

        if head == "qubits":
            if qubit_count is not None:
                raise CircuitParseError(lineno, "duplicate qubits header")
            if len(args) != 1:
                raise CircuitParseError(lineno, "expected 'qubits <k>'")
            qubit_count = _int(args[0], lineno, "qubit count")
            continue
        if qubit_count is None:
            raise CircuitParseError(lineno, "missing 'qubits <k>' header")

        if head == "reg":
            if gates:
                raise CircuitParseError(lineno, "register declared after the first gate")
            if len(args) != 4:
                raise CircuitParseError(lineno, "expected 'reg <name> <role> <start> <width>'")
            name, role = args[0], args[1]
            if role not in _ROLES:
                raise CircuitParseError(lineno, f"unknown register role {role!r}")
            start = _int(args[2], lineno, "register start")
            width = _int(args[3], lineno, "register width")
            registers.append(Register(name, _ROLES[role], start, width))
            continue

        if head not in _KINDS:
            raise CircuitParseError(lineno, f"unknown statement {head!r}")
        kind = _KINDS[head]
        if len(args) != kind.arity + 1:
            raise CircuitParseError(lineno, f"{head} takes {kind.arity + 1} operand(s), got {len(args)}")
        ops = [_int(a, lineno, "qubit index") for a in args]
        for q in ops:
            if q >= qubit_count:
                raise CircuitParseError(lineno, f"qubit {q} out of range for {qubit_count} qubits")
        try:
            gates.append(Gate(kind, tuple(ops[:-1]), ops[-1]))
        except ValueError as e:
            raise CircuitParseError(lineno, str(e)) from e

    if qubit_count is None:
        raise CircuitParseError(1, "missing 'qubits <k>' header")
    if not registers:
        registers = list(_default_registers(qubit_count))
    layout = RegisterLayout(tuple(registers))
    problems = layout.validate()
    if layout.qubit_count != qubit_count:
        problems.append(f"registers cover {layout.qubit_count} qubits, header declares {qubit_count}")
    if problems:
        raise CircuitParseError(1, "; ".join(problems))
    return Circuit(layout, tuple(gates))


def export_qasm(circuit: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.qubit_count}];"]
    for r in circuit.layout.registers:
        lines.append(f"// {r.name} ({r.role.value}): q[{r.start}..{r.stop - 1}]")
    for g in circuit.gates:
        ops = ",".join(f"q[{q}]" for q in g.qubits)
        name = {GateKind.X: "x", GateKind.CNOT: "cx"}.get(g.kind, "ccx")
        lines.append(f"{name} {ops};")
    return "\n".join(lines) + "\n"


def write_circuit_file(path: str | Path, circuit: Circuit, *, qasm: bool = False) -> Path:
    p = Path(path)
    ensure_parent_dir(p)
    p.write_text(export_qasm(circuit) if qasm else export_circuit(circuit), encoding="utf-8")
    kind = "QASM" if qasm else "circuit"
    logger.info("Wrote %s: %s (gates=%d, qubits=%d)", kind, str(p), len(circuit), circuit.qubit_count)
    return p


def read_circuit_file(path: str | Path) -> Circuit:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"circuit file not found: {path}")
    return import_circuit(p.read_text(encoding="utf-8"))


__all__ = [
    "CircuitParseError",
    "export_circuit",
    "import_circuit",
    "export_qasm",
    "write_circuit_file",
    "read_circuit_file",
]
