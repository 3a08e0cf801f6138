from __future__ import annotations

import pytest

from bosspec.coeffs import ProblemParams
from bosspec.shooting import shooting_spectrum


@pytest.fixture(scope="session")
def spectrum_cache():
    """Memoised m-window shooting spectra keyed by (epsilon, m, n_max, tol)."""
    cache = {}

    def get(eps: float, m: int, n_max: int, tol: float = 1e-9):
        key = (eps, m, n_max, tol)
        if key not in cache:
            cache[key] = shooting_spectrum(ProblemParams(eps), m, n_max, tol)
        return cache[key]

    return get


_CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record the verdict line of one acceptance criterion."""

    def record(k: int, passed: bool, detail: str) -> bool:
        line = f"CRITERION {k}: {'PASS' if passed else 'FAIL'} - {detail}"
        _CRITERIA[k] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[k])
