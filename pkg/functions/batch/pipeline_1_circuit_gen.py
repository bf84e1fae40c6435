# functions/batch/pipeline_1_circuit_gen.py
"""
Pipeline 1 — Circuit Generation (Adder / Subtractor / Ling / Modular)

Intent
- Synthesize one circuit from the command-line configuration (defaults from
  `synthesis.*` in parameters.yaml).
- Persist it in the lossless text format plus a JSON resource-report sidecar;
  optionally a lowered OpenQASM 2.0 copy.

Outputs (default)
- <outputs.circuits_dir>/<label>_n<n>.qc
- <same stem>.report.json
  - schema, command, config, seed
  - resources: ResourceReport (counts, Toffoli/AND depth, qubits, extra T)
  - formula_check: per-metric comparison with the closed-form cost tables
    (discrepancies are reported, never fatal)
  - steps / blocks: gate ranges of each synthesis step or modular block
  - fanout_summary: fan-out copies the lowering needed
- <same stem>.qasm when --qasm is given

Exit codes
- 0 success, 2 invalid configuration (e.g. "n must be a power of two").

CLI
    python -m functions.batch.pipeline_1_circuit_gen --tree sklansky --n 8 --strategy and --out s8.qc
    python -m functions.batch.pipeline_1_circuit_gen --ling --n 8 --qasm
    python -m functions.batch.pipeline_1_circuit_gen --modular --n 4
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from functions.batch.common import (
    EXIT_OK,
    add_synthesis_arguments,
    guarded,
    report_header,
    setup,
    synthesis_overrides,
)
from functions.core.adder import AdderCircuit, AdderConfig, Strategy, Variant, build
from functions.core.analyze import (
    DiscrepancyRecord,
    adder_alternates,
    check_against_paper,
    modular_alternates,
    report,
)
from functions.core.circuit import Circuit
from functions.core.modular import ModularCircuit, ModularConfig, build_modular_adder
from functions.core.prefix_tree import TreeKind
from functions.io.circuit_text import write_circuit_file
from functions.io.writers import write_json
from functions.utils.config import ParametersConfig, resolve_seed
from functions.utils.logging import get_logger


@dataclass(frozen=True)
class SynthTarget:
    """A synthesized circuit together with the objects it came from."""

    label: str
    n: int
    config: Dict[str, Any]
    circuit: Circuit
    adder: Optional[AdderCircuit] = None
    modular: Optional[ModularCircuit] = None

    @property
    def is_modular(self) -> bool:
        return self.modular is not None

    def formula_check(self) -> Optional[DiscrepancyRecord]:
        logger = get_logger(__name__)
        rep = report(self.circuit)
        try:
            if self.modular is not None:
                cfg = self.modular.config
                return check_against_paper(
                    rep, cfg.tree, cfg.strategy, cfg.n, modular=True, alternates=modular_alternates(self.modular)
                )
            assert self.adder is not None
            cfg = self.adder.config
            return check_against_paper(
                rep, cfg.tree, cfg.strategy, cfg.n, variant=cfg.variant, alternates=adder_alternates(self.adder)
            )
        except ValueError as e:
            logger.warning("No formula reference for %s n=%d: %s", self.label, self.n, e)
            return None

    def sections(self) -> Dict[str, Any]:
        if self.modular is not None:
            return {"blocks": {k: list(v) for k, v in self.modular.blocks.items()}}
        assert self.adder is not None
        return {
            "steps": {k: list(v) for k, v in self.adder.steps.items()},
            "fanout_summary": self.adder.fanout_summary,
        }


def build_target(
    params: ParametersConfig,
    *,
    n: int,
    tree: Optional[str] = None,
    strategy: Optional[str] = None,
    uncompute: Optional[bool] = None,
    p_in_place: Optional[bool] = None,
    variant: str = "add",
    modular: bool = False,
) -> SynthTarget:
    """Resolve flags against `synthesis.*` defaults and synthesize."""
    syn = params.synthesis
    variant_v = Variant(variant)
    if tree is not None:
        tree_v = TreeKind.parse(tree)
    elif variant_v is Variant.LING:
        tree_v = TreeKind.KOGGE_STONE
    else:
        tree_v = TreeKind.parse(syn.tree)
    strategy_v = Strategy.parse(strategy if strategy is not None else syn.strategy)
    p_in_place_v = syn.p_in_place if p_in_place is None else p_in_place

    if modular:
        if variant_v is not Variant.ADD:
            raise ValueError("the modular adder takes no --subtract / --ling variant")
        mcfg = ModularConfig(tree=tree_v, n=n, strategy=strategy_v, p_in_place=p_in_place_v)
        mod = build_modular_adder(mcfg)
        config = {**mcfg.model_dump(mode="json"), "modular": True}
        return SynthTarget(label=mcfg.label, n=n, config=config, circuit=mod.circuit, modular=mod)

    acfg = AdderConfig(
        tree=tree_v,
        n=n,
        strategy=strategy_v,
        uncompute=syn.uncompute if uncompute is None else uncompute,
        variant=variant_v,
        p_in_place=p_in_place_v,
    )
    adder = build(acfg)
    config = {**acfg.model_dump(mode="json"), "modular": False}
    return SynthTarget(label=acfg.label, n=n, config=config, circuit=adder.circuit, adder=adder)


def default_stem(params: ParametersConfig, target: SynthTarget) -> Path:
    return Path(params.outputs.circuits_dir) / f"{target.label.replace('+', '_')}_n{target.n}"


def run(
    *,
    parameters_path: str = "configs/parameters.yaml",
    n: int,
    tree: Optional[str] = None,
    strategy: Optional[str] = None,
    uncompute: Optional[bool] = None,
    p_in_place: Optional[bool] = None,
    variant: str = "add",
    modular: bool = False,
    out: Optional[str] = None,
    qasm: bool = False,
) -> Dict[str, Any]:
    params = setup(parameters_path)
    target = build_target(
        params,
        n=n,
        tree=tree,
        strategy=strategy,
        uncompute=uncompute,
        p_in_place=p_in_place,
        variant=variant,
        modular=modular,
    )
    logger = get_logger(__name__, run_id=f"gen:{target.label}:n{n}")

    circuit_path = Path(out) if out else default_stem(params, target).with_suffix(".qc")
    report_path = circuit_path.with_suffix(".report.json")
    qasm_path = circuit_path.with_suffix(".qasm") if qasm else None

    write_circuit_file(circuit_path, target.circuit)
    if qasm_path is not None:
        write_circuit_file(qasm_path, target.circuit, qasm=True)

    rep = report(target.circuit)
    record = target.formula_check()
    payload: Dict[str, Any] = {
        **report_header("gen", target.config, resolve_seed(None, params)),
        "label": target.label,
        "resources": rep.model_dump(),
        "formula_check": _record_payload(record),
        "outputs": {
            "circuit": str(circuit_path),
            "report": str(report_path),
            "qasm": str(qasm_path) if qasm_path else None,
        },
        **target.sections(),
    }
    write_json(report_path, payload)

    logger.info(
        "Gen: %s n=%d | gates=%d | qubits=%d | toffoli_count=%d | toffoli_depth=%d | discrepancies=%s",
        target.label,
        n,
        rep.gate_count,
        rep.qubit_count,
        rep.toffoli_count,
        rep.toffoli_depth,
        "n/a" if record is None else len(record.discrepancies),
    )
    return payload


def _record_payload(record: Optional[DiscrepancyRecord]) -> Optional[Dict[str, Any]]:
    if record is None:
        return None
    out = record.model_dump(mode="json")
    out["discrepancy_count"] = len(record.discrepancies)
    return out


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Pipeline 1: synthesize a prefix-tree adder circuit.")
    add_synthesis_arguments(parser)
    parser.add_argument("--out", default=None, help="Circuit file path (.qc); sidecars share its stem.")
    parser.add_argument("--qasm", action="store_true", help="Also write a lowered OpenQASM 2.0 file.")
    args = parser.parse_args(argv)

    def _go() -> int:
        run(parameters_path=args.parameters_path, out=args.out, qasm=bool(args.qasm), **synthesis_overrides(args))
        return EXIT_OK

    return guarded("gen", _go)


if __name__ == "__main__":
    raise SystemExit(main())


__all__ = ["SynthTarget", "build_target", "run", "main"]
