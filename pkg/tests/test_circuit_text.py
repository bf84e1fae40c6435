from __future__ import annotations

import numpy as np
import pytest

from functions.core.circuit import GateKind, RegisterRole
from functions.core.simulate import apply_batch
from functions.io.circuit_text import (
    CircuitParseError,
    export_circuit,
    export_qasm,
    import_circuit,
    read_circuit_file,
    write_circuit_file,
)


def test_minimal_text_gets_single_ancilla_register():
    c = import_circuit("qubits 3\nx 0\ncx 0 1  # copy\n\nccx 0 1 2\n")
    assert c.qubit_count == 3
    assert [g.kind for g in c.gates] == [GateKind.X, GateKind.CNOT, GateKind.TOFFOLI]
    assert c.layout.names == ("ancilla",)
    assert c.layout.register("ancilla").role is RegisterRole.ANCILLA


def test_empty_default_circuit_is_header_only():
    c = import_circuit("qubits 2\n")
    assert export_circuit(c) == "qubits 2\n"
    assert import_circuit(export_circuit(c)) == c


def test_export_format(small_circuit):
    text = export_circuit(small_circuit)
    lines = text.splitlines()
    assert lines[0] == "qubits 4"
    assert lines[1] == "reg a input_a 0 2"
    assert lines[-1] == "x 0"
    assert "ccx 0 1 2" in lines


def test_roundtrip_preserves_circuit_and_behaviour(sk8_and):
    c = sk8_and.circuit
    back = import_circuit(export_circuit(c))
    assert back == c
    rng = np.random.default_rng(0)
    states = np.zeros((c.qubit_count, 32), dtype=bool)
    inputs = list(sk8_and.input_a.qubits) + list(sk8_and.input_b.qubits)
    states[inputs] = rng.integers(0, 2, size=(len(inputs), 32)).astype(bool)
    assert (apply_batch(back, states) == apply_batch(c, states)).all()


def test_duplicate_operand_reports_line():
    with pytest.raises(CircuitParseError, match="duplicate operand") as err:
        import_circuit("qubits 3\nx 0\nccx 1 1 2\n")
    assert err.value.lineno == 3
    assert str(err.value).startswith("line 3: ")


@pytest.mark.parametrize(
    "text,lineno,fragment",
    [
        ("x 0\n", 1, "missing 'qubits <k>' header"),
        ("qubits 2\nqubits 2\n", 2, "duplicate qubits header"),
        ("qubits 2\nswap 0 1\n", 2, "unknown statement 'swap'"),
        ("qubits 2\ncx 0\n", 2, "cx takes 2 operand(s)"),
        ("qubits 2\ncx 0 5\n", 2, "qubit 5 out of range"),
        ("qubits 2\nx -1\n", 2, "must be non-negative"),
        ("qubits 2\nx one\n", 2, "must be an integer"),
        ("qubits 2\nreg a wizard 0 2\n", 2, "unknown register role"),
        ("qubits 2\nx 0\nreg a input_a 0 2\n", 3, "register declared after the first gate"),
        ("qubits 3\nreg a input_a 0 2\n", 1, "header declares 3"),
        ("", 1, "missing 'qubits <k>' header"),
    ],
)
def test_parse_errors(text, lineno, fragment):
    with pytest.raises(CircuitParseError) as err:
        import_circuit(text)
    assert err.value.lineno == lineno
    assert fragment in str(err.value)


def test_parse_error_is_a_value_error():
    assert issubclass(CircuitParseError, ValueError)


def test_qasm_lowers_and_gates(sk8_and):
    text = export_qasm(sk8_and.circuit)
    assert text.startswith("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n")
    assert f"qreg q[{sk8_and.circuit.qubit_count}];" in text
    assert "and " not in text and "unand" not in text
    gate_lines = [ln for ln in text.splitlines() if ln.startswith(("x ", "cx ", "ccx "))]
    assert len(gate_lines) == len(sk8_and.circuit)


def test_file_roundtrip(tmp_path, small_circuit):
    path = write_circuit_file(tmp_path / "nested" / "c.qc", small_circuit)
    assert path.exists()
    assert read_circuit_file(path) == small_circuit
    with pytest.raises(FileNotFoundError):
        read_circuit_file(tmp_path / "missing.qc")
