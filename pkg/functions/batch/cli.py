# functions/batch/cli.py
"""
qprefix command-line front end.

    python -m functions.batch.cli gen      --tree sklansky --n 8 --strategy and --out s8.qc
    python -m functions.batch.cli verify   --tree sklansky --n 4 --exhaustive
    python -m functions.batch.cli simulate --circuit s8.qc --a 3 --b 5
    python -m functions.batch.cli sweep    --n 4,8,16
    python -m functions.batch.cli export   --in s8.qc --qasm

Each subcommand forwards its remaining arguments to the pipeline module that
owns it and returns that pipeline's exit code.
"""

from __future__ import annotations

import argparse
from typing import Callable, Dict, List, Optional

from functions.batch import (
    pipeline_1_circuit_gen,
    pipeline_2_circuit_verify,
    pipeline_3_cost_sweep,
    pipeline_4_circuit_export,
)

COMMANDS: Dict[str, Callable[[Optional[List[str]]], int]] = {
    "gen": pipeline_1_circuit_gen.main,
    "verify": pipeline_2_circuit_verify.main,
    "simulate": pipeline_2_circuit_verify.simulate_main,
    "sweep": pipeline_3_cost_sweep.main,
    "export": pipeline_4_circuit_export.main,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="qprefix", description="Quantum prefix-tree adder synthesis toolkit.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("args", nargs=argparse.REMAINDER)
    ns = parser.parse_args(argv)
    return COMMANDS[ns.command](ns.args)


if __name__ == "__main__":
    raise SystemExit(main())


__all__ = ["COMMANDS", "main"]
