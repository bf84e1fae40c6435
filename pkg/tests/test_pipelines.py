from __future__ import annotations

import json
import logging
from pathlib import Path

import pandas as pd
import pytest

from functions.batch import cli, pipeline_1_circuit_gen, pipeline_2_circuit_verify, pipeline_3_cost_sweep
from functions.batch import pipeline_4_circuit_export
from functions.batch.common import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK
from functions.core.simulate import run_adder_batch as real_run_adder_batch
from functions.io.circuit_text import read_circuit_file
from functions.utils.config import load_parameters


def _read(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


# -----------------------------
# gen
# -----------------------------
def test_gen_writes_circuit_and_report(params_file, tmp_path):
    out = tmp_path / "s8.qc"
    rc = pipeline_1_circuit_gen.main(
        ["--parameters-path", params_file, "--tree", "sklansky", "--n", "8", "--strategy", "and", "--out", str(out), "--qasm"]
    )
    assert rc == EXIT_OK
    assert read_circuit_file(out).qubit_count > 0
    assert out.with_suffix(".qasm").read_text(encoding="utf-8").startswith("OPENQASM 2.0;")

    payload = _read(tmp_path / "s8.report.json")
    assert payload["schema"] == 1
    assert payload["command"] == "gen"
    assert payload["seed"] == 7
    assert payload["label"] == "sklansky+s2"
    assert payload["resources"]["toffoli_depth"] == 4
    assert payload["config"]["tree"] == "sklansky"
    assert set(payload["steps"]) >= {"step1", "step2", "step3", "step4"}
    assert payload["formula_check"]["discrepancy_count"] >= 0


def test_gen_default_location(params_file):
    payload = pipeline_1_circuit_gen.run(parameters_path=params_file, n=4, variant="subtract")
    circuits_dir = Path(load_parameters(params_file).outputs.circuits_dir)
    assert Path(payload["outputs"]["circuit"]) == circuits_dir / "sklansky_s2_subtract_n4.qc"
    assert Path(payload["outputs"]["report"]).exists()


def test_gen_ling_defaults_to_kogge_stone(params_file, tmp_path):
    rc = pipeline_1_circuit_gen.main(["--parameters-path", params_file, "--ling", "--n", "8", "--out", str(tmp_path / "l.qc")])
    assert rc == EXIT_OK
    payload = _read(tmp_path / "l.report.json")
    assert payload["label"] == "kogge-stone+s2+ling"
    assert "ling_tree" in payload["steps"]


def test_gen_modular(params_file, tmp_path):
    rc = pipeline_1_circuit_gen.main(["--parameters-path", params_file, "--modular", "--n", "4", "--out", str(tmp_path / "m.qc")])
    assert rc == EXIT_OK
    payload = _read(tmp_path / "m.report.json")
    assert payload["config"]["modular"] is True
    assert "set0" in payload["blocks"]


def test_gen_rejects_non_power_of_two(params_file, caplog):
    with caplog.at_level(logging.ERROR):
        rc = pipeline_1_circuit_gen.main(["--parameters-path", params_file, "--n", "6"])
    assert rc == EXIT_CONFIG
    assert "n must be a power of two" in caplog.text


def test_gen_missing_parameters_file(tmp_path):
    assert pipeline_1_circuit_gen.main(["--parameters-path", str(tmp_path / "nope.yaml"), "--n", "4"]) == EXIT_CONFIG


def test_gen_seed_from_environment(params_file, tmp_path, monkeypatch):
    monkeypatch.setenv("QPREFIX_SEED", "11")
    pipeline_1_circuit_gen.main(["--parameters-path", params_file, "--n", "4", "--out", str(tmp_path / "e.qc")])
    assert _read(tmp_path / "e.report.json")["seed"] == 11


# -----------------------------
# verify
# -----------------------------
def test_verify_exhaustive(params_file, tmp_path):
    report = tmp_path / "v.json"
    rc = pipeline_2_circuit_verify.main(
        ["--parameters-path", params_file, "--tree", "sklansky", "--n", "4", "--strategy", "and", "--exhaustive", "--report", str(report)]
    )
    assert rc == EXIT_OK
    payload = _read(report)
    assert payload["cases"] == 256
    assert payload["passed"] is True
    assert all(p["passed"] for p in payload["properties"].values())
    assert payload["failure_examples"] == []


def test_verify_modular_exhaustive(params_file):
    payload = pipeline_2_circuit_verify.run(parameters_path=params_file, n=4, modular=True, modulus=13, mode="exhaustive")
    assert payload["cases"] == 169
    assert payload["passed"] is True
    assert payload["config"]["modulus"] == 13


def test_verify_random_wide(params_file):
    payload = pipeline_2_circuit_verify.run(parameters_path=params_file, n=64, mode="random", trials=40, seed=7)
    assert payload["cases"] == 40
    assert payload["seed"] == 7
    assert payload["passed"] is True


def test_verify_subtract_without_uncompute_skips_ancilla(params_file):
    payload = pipeline_2_circuit_verify.run(
        parameters_path=params_file, n=4, variant="subtract", uncompute=False, mode="exhaustive"
    )
    assert payload["passed"] is True
    assert payload["properties"]["ancilla_clean"]["checked"] is False


def test_verify_uses_config_trials_and_env_seed(params_file, monkeypatch):
    monkeypatch.setenv("QPREFIX_SEED", "11")
    payload = pipeline_2_circuit_verify.run(parameters_path=params_file, n=8)
    assert payload["cases"] == 200
    assert payload["seed"] == 11


@pytest.mark.parametrize(
    "argv",
    [
        ["--n", "16", "--exhaustive"],
        ["--n", "4", "--modular"],
        ["--n", "4", "--modular", "--N", "16"],
        ["--n", "4", "--N", "5"],
    ],
)
def test_verify_config_errors(params_file, argv):
    params = load_parameters(params_file)
    assert params.verify.exhaustive_max_n == 10
    assert pipeline_2_circuit_verify.main(["--parameters-path", params_file, *argv]) == EXIT_CONFIG


def test_verify_reports_functional_failure(params_file, tmp_path, mocker):
    def off_by_one(adder, a, b):
        res = real_run_adder_batch(adder, a, b)
        return res._replace(sums=res.sums + 1)

    mocker.patch("functions.batch.pipeline_2_circuit_verify.run_adder_batch", side_effect=off_by_one)
    report = tmp_path / "fail.json"
    rc = pipeline_2_circuit_verify.main(["--parameters-path", params_file, "--n", "4", "--exhaustive", "--report", str(report)])
    assert rc == EXIT_FAILURE
    payload = _read(report)
    assert payload["properties"]["sum_correct"]["failures"] == 256
    assert payload["properties"]["inputs_preserved"]["passed"] is True
    first = payload["failure_examples"][0]
    assert (first["a"], first["b"], first["got"], first["expected"]) == (0, 0, 1, 0)


# -----------------------------
# simulate
# -----------------------------
def test_simulate_circuit_file(params_file, tmp_path, capsys):
    out = tmp_path / "s8.qc"
    pipeline_1_circuit_gen.main(["--parameters-path", params_file, "--n", "8", "--out", str(out)])
    capsys.readouterr()
    assert pipeline_2_circuit_verify.simulate_main(["--circuit", str(out), "--a", "3", "--b", "5"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "8"
    assert pipeline_2_circuit_verify.simulate_file(str(out), 255, 255)["result"] == 510


def test_simulate_modular_file(params_file, tmp_path):
    out = tmp_path / "m.qc"
    pipeline_1_circuit_gen.main(["--parameters-path", params_file, "--modular", "--n", "4", "--out", str(out)])
    assert pipeline_2_circuit_verify.simulate_file(str(out), 9, 7, 13)["result"] == 3
    with pytest.raises(ValueError, match="pass --N"):
        pipeline_2_circuit_verify.simulate_file(str(out), 9, 7)


def test_simulate_errors(tmp_path):
    path = tmp_path / "tiny.qc"
    path.write_text("qubits 2\nx 0\n", encoding="utf-8")
    assert pipeline_2_circuit_verify.simulate_main(["--circuit", str(path), "--a", "1", "--b", "1"]) == EXIT_CONFIG
    assert pipeline_2_circuit_verify.simulate_main(["--circuit", str(tmp_path / "none.qc"), "--a", "1", "--b", "1"]) == EXIT_CONFIG


# -----------------------------
# sweep
# -----------------------------
def test_sweep_writes_all_outputs(params_file, tmp_path):
    out = tmp_path / "sweep" / "cmp.csv"
    rc = pipeline_3_cost_sweep.main(["--parameters-path", params_file, "--n", "4,8", "--measured-max-n", "4", "--out", str(out)])
    assert rc == EXIT_OK
    df = pd.read_csv(out)
    assert list(df.columns) == ["adder", "n", "toffoli_count", "toffoli_depth", "qubit_count", "source"]
    assert sorted(df["n"].unique()) == [4, 8]
    assert (df["source"] == "measured").sum() == 10
    assert out.with_suffix(".md").read_text(encoding="utf-8").startswith("# Prefix-tree adder cost comparison")
    assert "<table>" in out.with_suffix(".html").read_text(encoding="utf-8")
    sidecar = _read(out.with_suffix(".json"))
    assert sidecar["command"] == "sweep"
    assert sidecar["ordering_violations"] == []
    assert sidecar["rows"] == len(df)


def test_sweep_is_deterministic(params_file, tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    pipeline_3_cost_sweep.run(parameters_path=params_file, n_values="4,8,16", out_csv=str(first))
    pipeline_3_cost_sweep.run(parameters_path=params_file, n_values="4,8,16", out_csv=str(second))
    assert first.read_bytes() == second.read_bytes()


def test_sweep_defaults_from_config(params_file):
    df = pipeline_3_cost_sweep.run(parameters_path=params_file)
    params = load_parameters(params_file)
    assert Path(params.outputs.sweep_csv).exists()
    assert Path(params.outputs.sweep_html).exists()
    assert sorted(df["n"].unique()) == [4, 8]


@pytest.mark.parametrize("argv", [["--n", "4,6"], ["--n", "64", "--radix", "2"]])
def test_sweep_config_errors(params_file, argv):
    assert pipeline_3_cost_sweep.main(["--parameters-path", params_file, *argv]) == EXIT_CONFIG


# -----------------------------
# export
# -----------------------------
def test_export_to_qasm_and_normalised_text(params_file, tmp_path):
    src = tmp_path / "k.qc"
    pipeline_1_circuit_gen.main(["--parameters-path", params_file, "--tree", "kogge-stone", "--n", "4", "--out", str(src)])

    assert pipeline_4_circuit_export.main(["--in", str(src), "--qasm"]) == EXIT_OK
    assert (tmp_path / "k.qasm").read_text(encoding="utf-8").startswith("OPENQASM 2.0;")

    dst = pipeline_4_circuit_export.run(input_path=str(src))
    assert dst.name == "k.norm.qc"
    assert read_circuit_file(dst) == read_circuit_file(src)


def test_export_refuses_to_overwrite_input(tmp_path):
    src = tmp_path / "c.qc"
    src.write_text("qubits 1\nx 0\n", encoding="utf-8")
    assert pipeline_4_circuit_export.main(["--in", str(src), "--out", str(src)]) == EXIT_CONFIG


# -----------------------------
# cli
# -----------------------------
def test_cli_delegates_to_pipelines(mocker):
    fake = mocker.Mock(return_value=3)
    mocker.patch.dict(cli.COMMANDS, {"gen": fake})
    assert cli.main(["gen", "--n", "8", "--tree", "sklansky"]) == 3
    fake.assert_called_once_with(["--n", "8", "--tree", "sklansky"])


def test_cli_unknown_command():
    with pytest.raises(SystemExit):
        cli.main(["frobnicate"])


def test_cli_end_to_end(params_file, tmp_path):
    out = tmp_path / "cli.qc"
    assert cli.main(["gen", "--parameters-path", params_file, "--n", "4", "--out", str(out)]) == EXIT_OK
    assert cli.main(["export", "--in", str(out), "--qasm"]) == EXIT_OK
