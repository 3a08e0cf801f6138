#!/usr/bin/env python3
"""Truncated-window eigenvalues and how they settle as the window grows.

Run with ``python3 demos/01_window_convergence.py``.
"""
from __future__ import annotations

from bosspec.golden import table_for_epsilon
from bosspec.recurrence import recurrence_spectrum
from bosspec.shooting import convergence_study

EPS = 1.0
table = table_for_epsilon(EPS)

# Each window [10**-m, 1 - 10**-m] gives a regular problem whose eigenvalues
# decrease as m grows.  The recurrence solves the untruncated problem.
limit = recurrence_spectrum(EPS, 5)

print(f"epsilon = {EPS}: lambda_n^(m) for m = 3..7, then the recurrence limit")
print("  n " + "".join(f"{'m=' + str(m):>12}" for m in range(3, 8)) + f"{'limit':>12}")
studies = {n: convergence_study(EPS, n, range(3, 8), tol=1e-9) for n in range(1, 6)}
for n, study in studies.items():
    row = "".join(f"{lam:12.6f}" for lam in study.lambdas)
    print(f"{n:3d} {row}{limit[n - 1].lam:12.6f}")

# The embedded published values for comparison, with the cell-by-cell gap.
print("\npublished minus computed")
for n, study in studies.items():
    gaps = [table.cell(n, m) - lam for m, lam in zip(range(3, 8), study.lambdas)]
    print(f"{n:3d} " + "".join(f"{g:+12.2e}" for g in gaps))

# The published cells run below the computed ones, by up to 0.16 at m = 3.
# Cutting only the left end of the interval, with the right end at
# 1 - 1e-13, reproduces most of them to 2e-4.
