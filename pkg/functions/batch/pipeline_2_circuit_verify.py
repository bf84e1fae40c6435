# functions/batch/pipeline_2_circuit_verify.py
"""
Pipeline 2 — Functional Verification (Basis-State Oracle)

Intent
- Synthesize the configured circuit and check it on basis states:
  - sum_correct: the output register holds the expected value
      add / ling : a + b
      subtract   : a - b + 2^n
      modular    : (a + b) mod N
  - inputs_preserved: a, b (and N) unchanged
  - ancilla_clean: every work qubit back at 0 (adders built without
    uncomputation skip this property)
- Attach the closed-form formula comparison; discrepancies are reported and
  never change the exit code.

Modes
- exhaustive: every pair in [0, 2^n)^2 (modular: [0, N)^2); n <= verify.exhaustive_max_n.
- random: `trials` seeded uniform pairs (seed: --seed > QPREFIX_SEED > verify.seed).

Concurrency
- Cases are cut into `verify.batch_size` columns and fanned out over a
  ThreadPoolExecutor (`verify.max_workers`); circuits are immutable, the numpy
  kernels release the GIL. Progress every `verify.progress_log_every` batches.

Outputs
- <outputs.reports_dir>/verify_<label>_n<n>.json (or --report)

Exit codes
- 0 all functional checks pass, 1 any functional failure, 2 invalid configuration.

Also here: `simulate`, a single-input run of a circuit file (registers a, b and
optionally N are loaded; the sum / result register is read back).

CLI
    python -m functions.batch.pipeline_2_circuit_verify --tree sklansky --n 4 --strategy and --exhaustive
    python -m functions.batch.pipeline_2_circuit_verify --modular --n 4 --N 13 --exhaustive
    python -m functions.batch.pipeline_2_circuit_verify --tree sklansky --n 64 --random --trials 1000 --seed 7
"""

from __future__ import annotations

import argparse
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from tqdm import tqdm

from functions.batch.common import (
    EXIT_FAILURE,
    EXIT_OK,
    add_synthesis_arguments,
    guarded,
    progress,
    report_header,
    setup,
    synthesis_overrides,
)
from functions.batch.pipeline_1_circuit_gen import SynthTarget, build_target
from functions.core.adder import Variant
from functions.core.simulate import (
    AndPreconditionError,
    BasisState,
    apply,
    random_operands,
    run_adder_batch,
    run_modular_batch,
)
from functions.io.circuit_text import read_circuit_file
from functions.io.writers import write_json
from functions.utils.config import EXHAUSTIVE_CEILING, resolve_seed
from functions.utils.logging import get_logger

MAX_FAILURE_EXAMPLES = 10
PROPERTIES = ("sum_correct", "inputs_preserved", "ancilla_clean")


class BatchOutcome(NamedTuple):
    cases: int
    failures: Dict[str, int]
    examples: List[Dict[str, Any]]
    error: Optional[str]


# -----------------------------
# Cases
# -----------------------------
def exhaustive_operands(upper: int) -> Tuple[np.ndarray, np.ndarray]:
    values = np.arange(upper, dtype=np.int64)
    return np.repeat(values, upper), np.tile(values, upper)


def expected_values(target: SynthTarget, a: np.ndarray, b: np.ndarray, modulus: Optional[int]) -> np.ndarray:
    if target.is_modular:
        assert modulus is not None
        return (a + b) % modulus
    if target.config["variant"] == Variant.SUBTRACT.value:
        return a - b + (1 << target.n)
    return a + b


def _check_batch(
    target: SynthTarget, a: np.ndarray, b: np.ndarray, modulus: Optional[int], check_ancilla: bool
) -> BatchOutcome:
    try:
        if target.modular is not None:
            res = run_modular_batch(target.modular, a, b, modulus)
            got, inputs, ancilla = res.results, res.inputs_preserved, res.ancilla_clean
        else:
            assert target.adder is not None
            res = run_adder_batch(target.adder, a, b)
            got, inputs, ancilla = res.sums, res.inputs_preserved, res.ancilla_clean
    except AndPreconditionError as e:
        size = int(len(a))
        return BatchOutcome(size, {p: size for p in PROPERTIES}, [], str(e))

    sum_ok = np.asarray(got == expected_values(target, a, b, modulus), dtype=bool)
    ancilla_ok = np.asarray(ancilla, dtype=bool) if check_ancilla else np.ones(len(a), dtype=bool)
    masks = {"sum_correct": sum_ok, "inputs_preserved": np.asarray(inputs, dtype=bool), "ancilla_clean": ancilla_ok}

    bad = ~(sum_ok & masks["inputs_preserved"] & ancilla_ok)
    examples = [
        {
            "a": int(a[j]),
            "b": int(b[j]),
            "got": int(got[j]),
            "expected": int(expected_values(target, a[j : j + 1], b[j : j + 1], modulus)[0]),
            "inputs_preserved": bool(masks["inputs_preserved"][j]),
            "ancilla_clean": bool(ancilla_ok[j]),
        }
        for j in np.flatnonzero(bad)[:MAX_FAILURE_EXAMPLES]
    ]
    return BatchOutcome(int(len(a)), {p: int((~m).sum()) for p, m in masks.items()}, examples, None)


def verify_target(
    target: SynthTarget,
    a: np.ndarray,
    b: np.ndarray,
    *,
    modulus: Optional[int] = None,
    batch_size: int = 4096,
    max_workers: int = 1,
    progress_log_every: int = 8,
    show_progress: bool = False,
) -> Dict[str, Any]:
    """Run every (a, b) case through the oracle; returns the per-property summary."""
    logger = get_logger(__name__)
    check_ancilla = target.is_modular or bool(target.config.get("uncompute", True))
    chunks = [(a[i : i + batch_size], b[i : i + batch_size]) for i in range(0, len(a), batch_size)]
    total = len(chunks)

    failures = {p: 0 for p in PROPERTIES}
    examples: List[Dict[str, Any]] = []
    errors: List[str] = []
    cases = 0

    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as executor:
        futures = [executor.submit(_check_batch, target, ca, cb, modulus, check_ancilla) for ca, cb in chunks]
        done = 0
        for fut in tqdm(as_completed(futures), total=total, disable=not show_progress, desc="verify"):
            outcome = fut.result()
            done += 1
            cases += outcome.cases
            for p, k in outcome.failures.items():
                failures[p] += k
            examples.extend(outcome.examples)
            if outcome.error:
                errors.append(outcome.error)
            progress(logger, f"Verify {target.label} n={target.n}", done, total, progress_log_every)

    examples.sort(key=lambda r: (r["a"], r["b"]))
    properties = {
        p: {"passed": failures[p] == 0, "failures": failures[p], "checked": p != "ancilla_clean" or check_ancilla}
        for p in PROPERTIES
    }
    return {
        "cases": cases,
        "properties": properties,
        "failure_examples": examples[:MAX_FAILURE_EXAMPLES],
        "errors": sorted(set(errors)),
        "passed": all(v["passed"] for v in properties.values()) and not errors,
    }


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
    modulus: Optional[int] = None,
    mode: str = "random",
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    report_path: Optional[str] = None,
    show_progress: bool = False,
) -> Dict[str, Any]:
    params = setup(parameters_path)
    if mode not in ("exhaustive", "random"):
        raise ValueError(f"unknown verify mode: {mode!r}")
    if mode == "exhaustive" and n > min(params.verify.exhaustive_max_n, EXHAUSTIVE_CEILING):
        raise ValueError(f"exhaustive verification is limited to n <= {params.verify.exhaustive_max_n}")
    if modular:
        if modulus is None:
            raise ValueError("--modular requires --N")
        if not 2 <= modulus < (1 << n):
            raise ValueError(f"N must satisfy 2 <= N < 2^n (got N={modulus}, n={n})")
    elif modulus is not None:
        raise ValueError("--N is only meaningful with --modular")

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
    logger = get_logger(__name__, run_id=f"verify:{target.label}:n{n}")
    seed_v = resolve_seed(seed, params)
    upper = modulus if modular else (1 << n)

    if mode == "exhaustive":
        a, b = exhaustive_operands(upper)
    else:
        a, b = random_operands(n, trials or params.verify.trials, seed_v, upper=upper)

    logger.info(
        "Verify: %s n=%d | mode=%s | cases=%d | seed=%d | batch_size=%d | max_workers=%d",
        target.label,
        n,
        mode,
        len(a),
        seed_v,
        params.verify.batch_size,
        params.verify.max_workers,
    )
    try:
        summary = verify_target(
            target,
            a,
            b,
            modulus=modulus,
            batch_size=params.verify.batch_size,
            max_workers=params.verify.max_workers,
            progress_log_every=params.verify.progress_log_every,
            show_progress=show_progress,
        )
    except Exception:
        logger.exception("Verify: %s n=%d crashed", target.label, n)
        raise

    record = target.formula_check()
    config = {**target.config, "modulus": modulus}
    payload: Dict[str, Any] = {
        **report_header("verify", config, seed_v),
        "label": target.label,
        "mode": mode,
        **summary,
        "formula_check": None if record is None else {
            **record.model_dump(mode="json"),
            "discrepancy_count": len(record.discrepancies),
        },
    }
    out = Path(report_path) if report_path else (
        Path(params.outputs.reports_dir) / f"verify_{target.label.replace('+', '_')}_n{n}.json"
    )
    write_json(out, payload)

    level = logger.info if summary["passed"] else logger.error
    level(
        "Verify: %s n=%d %s | cases=%d | failures=%s",
        target.label,
        n,
        "PASS" if summary["passed"] else "FAIL",
        summary["cases"],
        {p: v["failures"] for p, v in summary["properties"].items()},
    )
    return payload


# -----------------------------
# simulate (single input, circuit file)
# -----------------------------
def simulate_file(path: str, a: int, b: int, modulus: Optional[int] = None) -> Dict[str, Any]:
    circuit = read_circuit_file(path)
    layout = circuit.layout
    for name in ("a", "b"):
        if name not in layout:
            raise ValueError(f"circuit has no register {name!r}")
    loads = [("a", a), ("b", b)]
    if "N" in layout:
        if modulus is None:
            raise ValueError("circuit has a modulus register; pass --N")
        loads.append(("N", modulus))

    bits = [0] * circuit.qubit_count
    for name, value in loads:
        reg = layout.register(name)
        if value < 0 or value >= (1 << reg.width):
            raise ValueError(f"operand out of range: {name}={value} does not fit in {reg.width} qubits")
        for i, q in enumerate(reg.qubits):
            bits[q] = (value >> i) & 1

    final = apply(circuit, BasisState(tuple(bits)))
    out_regs = ("r_sum", "r_top") if "r_sum" in layout else ("g_sum", "carry_out")
    out_qubits = [q for name in out_regs if name in layout for q in layout.register(name).qubits]
    result = sum(final[q] << i for i, q in enumerate(out_qubits))
    return {"result": result, "registers": list(out_regs), "a": a, "b": b, "N": modulus}


def simulate_main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Run a circuit file on one basis-state input.")
    parser.add_argument("--circuit", required=True)
    parser.add_argument("--a", type=int, required=True)
    parser.add_argument("--b", type=int, required=True)
    parser.add_argument("--N", dest="modulus", type=int, default=None)
    args = parser.parse_args(argv)

    def _go() -> int:
        res = simulate_file(args.circuit, args.a, args.b, args.modulus)
        get_logger(__name__).info("Simulate: %s a=%d b=%d -> %d", args.circuit, args.a, args.b, res["result"])
        print(res["result"])
        return EXIT_OK

    return guarded("simulate", _go)


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Pipeline 2: verify a synthesized circuit on basis states.")
    add_synthesis_arguments(parser)
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--random", action="store_true")
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--N", dest="modulus", type=int, default=None, help="Modulus (with --modular).")
    parser.add_argument("--report", default=None, help="JSON report path.")
    parser.add_argument("--progress", action="store_true", help="Show a progress bar.")
    args = parser.parse_args(argv)

    def _go() -> int:
        payload = run(
            parameters_path=args.parameters_path,
            modulus=args.modulus,
            mode="exhaustive" if args.exhaustive else "random",
            trials=args.trials,
            seed=args.seed,
            report_path=args.report,
            show_progress=bool(args.progress),
            **synthesis_overrides(args),
        )
        return EXIT_OK if payload["passed"] else EXIT_FAILURE

    return guarded("verify", _go)


if __name__ == "__main__":
    raise SystemExit(main())


__all__ = ["exhaustive_operands", "expected_values", "verify_target", "simulate_file", "run", "main", "simulate_main"]
