# functions/io/writers.py
"""
Writers (Deterministic Report Artifacts)

Intent
- One deterministic way to persist pipeline outputs:
  - JSON for run reports and resource-report sidecars
  - JSONL for per-configuration verification records
  - CSV for the comparison sweep
  - Markdown / HTML renderings of the sweep table

Primary functions
- ensure_parent_dir(path) -> None
- write_json(path, payload) -> None
- write_jsonl(path, records) -> None
- write_csv(path, df) -> None
- write_markdown(path, df, title=None) -> str
- write_html(path, markdown_text, title) -> None

Key behaviors
- UTF-8 everywhere; JSON uses sort_keys=True and indent=2.
- CSV: index=False, column order exactly df.columns (caller-controlled).
- Markdown tables come from `DataFrame.to_markdown` (tabulate, GitHub style);
  HTML is the markdown rendered by the `markdown` package with the tables extension.
- Parent directories are created on demand; every write logs one INFO line.

Design notes
- Writers are thin: no schema enforcement, no column mutation.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

import markdown
import pandas as pd

from functions.utils.logging import get_logger


def ensure_parent_dir(path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)


def write_json(path: str | Path, payload: Mapping[str, Any]) -> None:
    logger = get_logger(__name__)
    ensure_parent_dir(path)
    p = Path(path)
    p.write_text(json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    logger.info("Wrote JSON: %s (keys=%d)", str(p), len(payload))


def write_jsonl(path: str | Path, records: Sequence[Mapping[str, Any]]) -> None:
    logger = get_logger(__name__)
    ensure_parent_dir(path)
    p = Path(path)
    with p.open("w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
    logger.info("Wrote JSONL: %s (rows=%d)", str(p), len(records))


def write_csv(path: str | Path, df: pd.DataFrame) -> None:
    logger = get_logger(__name__)
    ensure_parent_dir(path)
    p = Path(path)
    df.to_csv(p, index=False, encoding="utf-8")
    logger.info("Wrote CSV: %s (rows=%d, cols=%d)", str(p), int(df.shape[0]), int(df.shape[1]))


def write_markdown(path: str | Path, df: pd.DataFrame, title: Optional[str] = None) -> str:
    """Write `df` as a GitHub-style table (optionally under a heading); returns the text."""
    logger = get_logger(__name__)
    ensure_parent_dir(path)
    body = df.to_markdown(index=False, tablefmt="github")
    text = (f"# {title}\n\n" if title else "") + body + "\n"
    p = Path(path)
    p.write_text(text, encoding="utf-8")
    logger.info("Wrote Markdown: %s (rows=%d)", str(p), int(df.shape[0]))
    return text


def write_html(path: str | Path, markdown_text: str, title: str) -> None:
    logger = get_logger(__name__)
    ensure_parent_dir(path)
    body = markdown.markdown(markdown_text, extensions=["tables"])
    html = (
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
        f"<title>{title}</title>\n</head>\n<body>\n{body}\n</body>\n</html>\n"
    )
    p = Path(path)
    p.write_text(html, encoding="utf-8")
    logger.info("Wrote HTML: %s (bytes=%d)", str(p), len(html))


__all__ = ["ensure_parent_dir", "write_json", "write_jsonl", "write_csv", "write_markdown", "write_html"]
