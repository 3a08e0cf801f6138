"""Published truncated-window eigenvalues ``lambda_n^(m)`` used for regression.

Each table holds ``lambda_n^(m)`` for windows ``m = 3..7`` at one epsilon,
plus comparison columns of full-problem values from other works.  The
comparison columns are reference data only and are never gated.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

__all__ = ["GoldenTable", "TABLES", "table_for_epsilon", "WINDOWS"]

WINDOWS = (3, 4, 5, 6, 7)


@dataclass(frozen=True)
class GoldenTable:
    """Rows ``n -> (lambda^(3), ..., lambda^(7))`` for one epsilon."""

    epsilon: float
    source: str
    rows: dict[int, tuple[float, ...]]
    comparisons: dict[str, dict[int, float | None]] = field(default_factory=dict)
    ms: tuple[int, ...] = WINDOWS

    def __post_init__(self):
        for n, vals in self.rows.items():
            if len(vals) != len(self.ms):
                raise ValueError(f"row {n} has {len(vals)} entries, expected {len(self.ms)}")

    @property
    def n_max(self) -> int:
        return max(self.rows)

    def cell(self, n: int, m: int) -> float:
        return self.rows[n][self.ms.index(m)]

    def cells(self) -> Iterator[tuple[int, int, float]]:
        for n in sorted(self.rows):
            for m, lam in zip(self.ms, self.rows[n]):
                yield n, m, lam

    def column(self, m: int) -> list[float]:
        return [self.cell(n, m) for n in sorted(self.rows)]

    def invariant_violations(self) -> list[str]:
        """Cells breaking 'increasing in n' or 'non-increasing in m'."""
        bad = []
        ns = sorted(self.rows)
        for m in self.ms:
            col = self.column(m)
            bad += [f"m={m}: n={ns[i + 1]} not above n={ns[i]}"
                    for i in range(len(col) - 1) if not col[i + 1] > col[i]]
        for n in ns:
            row = self.rows[n]
            bad += [f"n={n}: m={self.ms[i + 1]} above m={self.ms[i]}"
                    for i in range(len(row) - 1) if row[i + 1] > row[i]]
        return bad

    def with_cell(self, n: int, m: int, value: float) -> "GoldenTable":
        """Copy with one cell replaced (used for negative controls)."""
        rows = dict(self.rows)
        row = list(rows[n])
        row[self.ms.index(m)] = value
        rows[n] = tuple(row)
        return GoldenTable(self.epsilon, self.source, rows, self.comparisons, self.ms)


TABLE_1 = GoldenTable(
    epsilon=1.0,
    source="Table1",
    rows={
        1: (1.45457, 1.44906, 1.44851, 1.44845, 1.44844),
        2: (4.34574, 4.31891, 4.31614, 4.31587, 4.31584),
        3: (8.70318, 8.63035, 8.62264, 8.62186, 8.62178),
        4: (14.53324, 14.38251, 14.36590, 14.36421, 14.36405),
        5: (21.84048, 21.57464, 21.54473, 21.54167, 21.54137),
    },
    comparisons={
        "davies_2007": {1: 1.4485, 2: 4.3159, 3: 8.6219, 4: 14.3638, 5: 21.5414},
        "chugunova_2007": {1: 1.449323, 2: 4.319645, 3: 8.631474, 4: 14.382886, 5: None},
    },
)

TABLE_2 = GoldenTable(
    epsilon=0.5,
    source="Table2",
    rows={
        1: (1.17382, 1.16782, 1.16720, 1.16714, 1.16714),
        2: (2.99250, 2.97016, 2.96847, 2.96823, 2.96821),
        3: (5.54084, 5.48803, 5.48231, 5.48174, 5.48168),
        4: (8.82509, 8.72519, 8.71398, 8.71284, 8.71272),
        5: (12.85050, 12.68265, 12.66336, 12.66138, 12.66119),
        6: (17.61828, 17.36052, 17.32987, 17.32674, 17.32643),
        7: (23.13086, 22.75976, 22.71552, 22.71081, 22.71033),
        8: (29.39064, 28.88240, 28.81847, 28.81174, 28.81106),
        9: (36.39780, 35.72664, 35.63949, 35.63022, 35.62928),
        10: (44.15374, 43.29376, 43.17838, 43.16790, 43.16666),
    },
    comparisons={
        "chugunova_2007": {1: 1.167342, 2: 2.968852, 3: 5.483680, 4: 8.715534,
                           5: None, 6: None, 7: None, 8: None, 9: None, 10: None},
    },
)

TABLE_3 = GoldenTable(
    epsilon=0.1,
    source="Table3",
    rows={
        1: (1.02908, 1.01149, 1.00961, 1.00942, 1.00940),
        2: (2.11378, 2.07759, 2.07349, 2.07306, 2.07305),
        3: (3.29583, 3.23676, 3.22974, 3.22902, 3.22894),
        4: (4.59835, 4.51260, 4.50208, 4.50099, 4.50088),
        5: (6.03392, 5.91589, 5.90082, 5.89984, 5.89968),
        6: (7.60918, 7.45354, 7.43391, 7.43175, 7.43154),
        7: (9.32789, 9.13017, 9.10350, 9.10063, 9.10034),
        8: (11.19231, 10.94654, 10.91287, 10.90919, 10.90881),
        9: (13.20382, 12.90464, 12.86256, 12.85789, 12.85742),
        10: (15.36360, 15.00536, 14.95367, 14.94786, 14.94727),
    },
    comparisons={
        "bobs_numerical": {1: 1.0097, 2: 2.0733, 3: 3.2297, 4: 4.5012, 5: 5.8992,
                           6: 7.4298, 7: 9.0951, 8: 10.8945, 9: 12.8252, 10: 14.8820},
        "davies_2007": {1: 1.00968, 2: 2.07334, 3: 3.22978, 4: 4.50134, 5: 5.89993,
                        6: 7.43194, 7: 9.10097, 8: 10.9092, 9: 12.8578, 10: 14.9478},
    },
)

TABLES = {t.source: t for t in (TABLE_1, TABLE_2, TABLE_3)}


def table_for_epsilon(epsilon: float) -> GoldenTable:
    for t in TABLES.values():
        if t.epsilon == float(epsilon):
            return t
    raise KeyError(f"no embedded table for epsilon={epsilon}")
