from __future__ import annotations

import pytest

from bosspec.golden import TABLES, WINDOWS, table_for_epsilon


@pytest.mark.parametrize("source", sorted(TABLES))
def test_tables_satisfy_invariants(source):
    assert TABLES[source].invariant_violations() == []


@pytest.mark.parametrize("eps, n, m, value", [
    (1.0, 1, 7, 1.44844),
    (1.0, 5, 3, 21.84048),
    (0.5, 10, 7, 43.16666),
    (0.1, 10, 7, 14.94727),
    (0.5, 1, 3, 1.17382),
    (0.1, 1, 3, 1.02908),
])
def test_spot_anchors_embedded(eps, n, m, value):
    assert table_for_epsilon(eps).cell(n, m) == value


def test_table_shapes():
    assert TABLES["Table1"].n_max == 5
    assert TABLES["Table2"].n_max == 10
    assert TABLES["Table3"].n_max == 10
    for t in TABLES.values():
        assert t.ms == WINDOWS
        assert len(list(t.cells())) == t.n_max * len(WINDOWS)


def test_comparison_columns_present():
    assert TABLES["Table1"].comparisons["davies_2007"][1] == 1.4485
    assert TABLES["Table1"].comparisons["chugunova_2007"][5] is None
    assert TABLES["Table3"].comparisons["bobs_numerical"][10] == 14.8820


def test_negative_control_breaks_invariant():
    bad = TABLES["Table1"].with_cell(2, 5, 4.5)
    assert bad.cell(2, 5) == 4.5
    assert TABLES["Table1"].cell(2, 5) == 4.31614
    assert any("n=2" in v for v in bad.invariant_violations())


def test_unknown_epsilon():
    with pytest.raises(KeyError):
        table_for_epsilon(0.7)


def test_row_length_checked():
    from bosspec.golden import GoldenTable

    with pytest.raises(ValueError):
        GoldenTable(1.0, "x", {1: (1.0, 2.0)})
