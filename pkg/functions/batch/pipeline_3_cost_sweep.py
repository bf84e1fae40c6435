# functions/batch/pipeline_3_cost_sweep.py
"""
Pipeline 3 — Cost Comparison Sweep (Formulas + Measured Circuits)

Intent
- Evaluate every comparison-adder closed form and every (tree, strategy)
  cost formula over a list of n, plus measured rows for synthesized circuits
  up to `sweep.measured_max_n`.
- Check the depth ordering Optimal+S2 < Optimal+S1 < min(Draper out-of-place,
  Quantum Ling) for every n >= 8.

Outputs (default, from `outputs.*`)
- comparison_sweep.csv   columns: adder,n,toffoli_count,toffoli_depth,qubit_count,source
- comparison_sweep.md    GitHub-style table
- comparison_sweep.html  the same table rendered to HTML
- comparison_sweep.json  schema/command/config/seed + ordering violations

Deterministic: same n list, radix and measured_max_n give byte-identical files.
Ordering violations are logged as warnings and recorded; the exit code is 0
unless the configuration is invalid (2).

CLI
    python -m functions.batch.pipeline_3_cost_sweep --n 4,8,16,32,64,128,256,512,1024
    python -m functions.batch.pipeline_3_cost_sweep --n 64 --radix 4
"""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from functions.batch.common import EXIT_OK, guarded, report_header, setup
from functions.core.analyze import comparison_sweep, depth_ordering_violations
from functions.io.writers import write_csv, write_html, write_json, write_markdown
from functions.utils.config import SweepConfig, resolve_seed
from functions.utils.logging import get_logger

TITLE = "Prefix-tree adder cost comparison"


def run(
    *,
    parameters_path: str = "configs/parameters.yaml",
    n_values: Optional[str | List[int]] = None,
    radix: Optional[int] = None,
    measured_max_n: Optional[int] = None,
    out_csv: Optional[str] = None,
) -> pd.DataFrame:
    params = setup(parameters_path)
    logger = get_logger(__name__, run_id="sweep")

    sweep = SweepConfig(
        n_values=params.sweep.n_values if n_values is None else n_values,
        radix=params.sweep.radix if radix is None else radix,
        measured_max_n=params.sweep.measured_max_n if measured_max_n is None else measured_max_n,
    )
    logger.info(
        "Sweep: n=%s | radix=%s | measured_max_n=%d", sweep.n_values, sweep.radix, sweep.measured_max_n
    )

    df = comparison_sweep(
        sweep.n_values,
        radix=sweep.radix,
        measured_max_n=sweep.measured_max_n,
        max_workers=params.verify.max_workers,
    )

    violations = depth_ordering_violations(df)
    for v in violations:
        logger.warning("Sweep: depth ordering violated: %s", v)

    csv_path = Path(out_csv) if out_csv else Path(params.outputs.sweep_csv)
    md_path = Path(params.outputs.sweep_markdown) if out_csv is None else csv_path.with_suffix(".md")
    html_path = Path(params.outputs.sweep_html) if out_csv is None else csv_path.with_suffix(".html")

    write_csv(csv_path, df)
    md = write_markdown(md_path, df, title=TITLE)
    write_html(html_path, md, title=TITLE)

    payload: Dict[str, Any] = {
        **report_header("sweep", sweep.model_dump(mode="json"), resolve_seed(None, params)),
        "rows": int(df.shape[0]),
        "ordering_violations": violations,
        "outputs": {"csv": str(csv_path), "markdown": str(md_path), "html": str(html_path)},
    }
    write_json(csv_path.with_suffix(".json"), payload)

    logger.info(
        "Sweep: rows=%d | measured=%d | ordering_violations=%d",
        int(df.shape[0]),
        int((df["source"] == "measured").sum()),
        len(violations),
    )
    return df


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Pipeline 3: cost comparison sweep (CSV + Markdown + HTML).")
    parser.add_argument("--parameters-path", default="configs/parameters.yaml")
    parser.add_argument("--n", dest="n_values", default=None, help='Comma-separated powers of two, e.g. "4,8,16".')
    parser.add_argument("--radix", type=int, default=None, help="Higher-radix comparison row (2 < r <= n).")
    parser.add_argument("--measured-max-n", type=int, default=None)
    parser.add_argument("--out", default=None, help="CSV path; markdown/html/json share its stem.")
    args = parser.parse_args(argv)

    def _go() -> int:
        run(
            parameters_path=args.parameters_path,
            n_values=args.n_values,
            radix=args.radix,
            measured_max_n=args.measured_max_n,
            out_csv=args.out,
        )
        return EXIT_OK

    return guarded("sweep", _go)


if __name__ == "__main__":
    raise SystemExit(main())


__all__ = ["run", "main"]
