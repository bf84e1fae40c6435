from __future__ import annotations

import pytest

from functions.core import formulas
from functions.core.formulas import TABLE4_LABELS, all_cells, evaluate, omega, rows


def test_omega():
    assert omega(8) == 1
    assert omega(6) == 2
    assert omega(7) == 3


@pytest.mark.parametrize(
    "table,row,n,metric,expected",
    [
        ("table4", "cuccaro_rca", 8, "toffoli_count", 15),
        ("table4", "draper_out_of_place", 16, "toffoli_depth", 10),
        ("table2", "brent-kung", 8, "toffoli_count", 27),
        ("table2", "kogge-stone", 8, "qubit_count", 74),
        ("table4", "optimal_s2", 1024, "toffoli_depth", 11),
        ("table2", "sklansky", 8, "toffoli_count", 34),
        ("table2", "sklansky", 8, "toffoli_depth", 7),
        ("table2", "sklansky", 8, "qubit_count", 37),
        ("table3", "sklansky", 8, "toffoli_count", 12),
        ("table3", "sklansky", 8, "toffoli_depth", 4),
        ("table3", "kogge-stone", 16, "toffoli_depth", 6),
        ("table1", "brent-kung", 16, "nodes", 26),
        ("prose", "sklansky+s2+modular", 8, "toffoli_depth", 20),
    ],
)
def test_known_values(table, row, n, metric, expected):
    assert evaluate(table, row, n)[metric] == expected


def test_logical_and_rows_carry_extra_t():
    cell = evaluate("table3", "sklansky", 8)
    assert cell["extra_t_depth"] == 2
    assert set(cell) == {"extra_t_count", "toffoli_count", "extra_t_depth", "toffoli_depth", "qubit_count"}


def test_non_integral_values_stay_float():
    assert isinstance(evaluate("table4", "takahashi_2008", 32)["qubit_count"], float)


def test_every_cell_evaluates():
    for table, row in all_cells():
        values = evaluate(table, row, 16, 4)
        assert values, (table, row)


def test_higher_radix_range():
    assert "toffoli_depth" in evaluate("table4", "higher_radix", 64, 4)
    with pytest.raises(ValueError, match="radix r out of range"):
        evaluate("table4", "higher_radix", 64, 2)
    with pytest.raises(ValueError, match="radix r out of range"):
        evaluate("table4", "higher_radix", 4, 8)


def test_unknown_rows_and_tables():
    with pytest.raises(ValueError, match="unknown formula row"):
        evaluate("table2", "ripple", 8)
    with pytest.raises(ValueError, match="unknown formula table"):
        rows("table9")
    with pytest.raises(ValueError, match="n >= 2"):
        evaluate("table2", "sklansky", 1)


def test_comparison_catalogue_is_labelled():
    assert set(rows("table4")) == set(TABLE4_LABELS)
    assert set(formulas.FORMULA_TABLE) == {"table1", "table2", "table3", "table4", "table5", "table6", "table7", "prose"}
