from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
import yaml

from functions.core.adder import AdderConfig, build_adder
from functions.core.circuit import Circuit, RegisterLayout, RegisterRole, cnot, toffoli, x


def exhaustive_pairs(upper: int):
    values = np.arange(upper, dtype=np.int64)
    return np.repeat(values, upper), np.tile(values, upper)


@pytest.fixture(autouse=True)
def _no_seed_env(monkeypatch):
    monkeypatch.delenv("QPREFIX_SEED", raising=False)


@pytest.fixture
def params_file(tmp_path: Path) -> str:
    out = tmp_path / "artifacts"
    data = {
        "project": {"name": "qprefix-test"},
        "synthesis": {"tree": "sklansky", "strategy": "and", "uncompute": True, "p_in_place": False},
        "verify": {"seed": 7, "trials": 200, "batch_size": 1024, "max_workers": 2, "progress_log_every": 4},
        "sweep": {"n_values": [4, 8], "measured_max_n": 4},
        "logging": {"level": "INFO", "log_file": None, "silence_noisy_logs": True},
        "outputs": {
            "artifacts_dir": str(out),
            "circuits_dir": str(out / "circuits"),
            "reports_dir": str(out / "reports"),
            "sweep_csv": str(out / "reports" / "comparison_sweep.csv"),
            "sweep_markdown": str(out / "reports" / "comparison_sweep.md"),
            "sweep_html": str(out / "reports" / "comparison_sweep.html"),
        },
    }
    path = tmp_path / "parameters.yaml"
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return str(path)


@pytest.fixture
def small_circuit() -> Circuit:
    layout = RegisterLayout.from_widths(
        [
            ("a", RegisterRole.INPUT_A, 2),
            ("t", RegisterRole.G_SUM, 1),
            ("ancilla", RegisterRole.ANCILLA, 1),
        ]
    )
    return Circuit(layout, (x(0), cnot(0, 3), toffoli(0, 1, 2), cnot(0, 3), x(0)))


@pytest.fixture(scope="session")
def sk8_and():
    return build_adder(AdderConfig(tree="sklansky", n=8, strategy="and"))


@pytest.fixture(scope="session")
def sk8_toffoli():
    return build_adder(AdderConfig(tree="sklansky", n=8, strategy="toffoli"))
