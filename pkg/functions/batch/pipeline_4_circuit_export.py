# functions/batch/pipeline_4_circuit_export.py
"""
Pipeline 4 — Circuit Export

- text -> QASM: lower a circuit file to OpenQASM 2.0 (AND / UNAND become ccx).
- text -> text: import then export, i.e. normalise comments, spacing and
  statement order into the canonical form.

CLI
    python -m functions.batch.pipeline_4_circuit_export --in s8.qc --qasm
    python -m functions.batch.pipeline_4_circuit_export --in s8.qc --out s8.norm.qc
"""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import List, Optional

from functions.batch.common import EXIT_OK, guarded
from functions.io.circuit_text import read_circuit_file, write_circuit_file
from functions.utils.logging import get_logger


def run(*, input_path: str, output_path: Optional[str] = None, qasm: bool = False) -> Path:
    logger = get_logger(__name__)
    circuit = read_circuit_file(input_path)
    src = Path(input_path)
    if output_path:
        dst = Path(output_path)
    else:
        dst = src.with_suffix(".qasm") if qasm else src.with_name(f"{src.stem}.norm{src.suffix or '.qc'}")
    if dst.resolve() == src.resolve():
        raise ValueError(f"refusing to overwrite the input file: {src}")

    write_circuit_file(dst, circuit, qasm=qasm)
    logger.info("Export: %s -> %s (%s)", str(src), str(dst), "qasm" if qasm else "text")
    return dst


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Pipeline 4: convert a circuit file (text -> QASM / text).")
    parser.add_argument("--in", dest="input_path", required=True)
    parser.add_argument("--out", dest="output_path", default=None)
    parser.add_argument("--qasm", action="store_true")
    args = parser.parse_args(argv)

    def _go() -> int:
        run(input_path=args.input_path, output_path=args.output_path, qasm=bool(args.qasm))
        return EXIT_OK

    return guarded("export", _go)


if __name__ == "__main__":
    raise SystemExit(main())


__all__ = ["run", "main"]
