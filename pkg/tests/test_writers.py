from __future__ import annotations

import json

import pandas as pd

from functions.io.writers import write_csv, write_html, write_json, write_jsonl, write_markdown


def test_write_json_sorted_and_nested(tmp_path):
    path = tmp_path / "a" / "b" / "report.json"
    write_json(path, {"schema": 1, "b": [1, 2], "a": {"z": 1}})
    text = path.read_text(encoding="utf-8")
    assert text.index('"a"') < text.index('"b"') < text.index('"schema"')
    assert json.loads(text)["a"] == {"z": 1}


def test_write_jsonl(tmp_path):
    path = tmp_path / "rows.jsonl"
    write_jsonl(path, [{"n": 4}, {"n": 8}])
    assert [json.loads(line)["n"] for line in path.read_text(encoding="utf-8").splitlines()] == [4, 8]


def test_csv_markdown_html(tmp_path):
    df = pd.DataFrame([{"adder": "sklansky+s2", "n": 8, "toffoli_depth": 4}])
    write_csv(tmp_path / "t.csv", df)
    assert list(pd.read_csv(tmp_path / "t.csv").columns) == ["adder", "n", "toffoli_depth"]

    md = write_markdown(tmp_path / "t.md", df, title="Depths")
    assert md.startswith("# Depths\n\n| adder")
    assert "sklansky+s2" in md

    write_html(tmp_path / "t.html", md, title="Depths")
    html = (tmp_path / "t.html").read_text(encoding="utf-8")
    assert "<title>Depths</title>" in html
    assert "<table>" in html and "<td>sklansky+s2</td>" in html
