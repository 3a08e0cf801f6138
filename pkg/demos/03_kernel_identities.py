#!/usr/bin/env python3
"""Trace and Hilbert-Schmidt identities of the inverse operator.

Run with ``python3 demos/03_kernel_identities.py``.
"""
from __future__ import annotations

import math

from bosspec.asymptotics import AsymptoticBounds
from bosspec.greens import hs_norm_sq, spectral_sum, trace_integral
from bosspec.shooting import shooting_spectrum

# The inverse has kernel gamma(min(x, y)).  Its trace and squared
# Hilbert-Schmidt norm are sums over the spectrum:
#   int gamma w = sum 1/mu_n,    int int G^2 w w = sum 1/mu_n^2.
K = 50
for eps in (0.1, 0.5, 1.0, 1.9):
    mus = [e.mu for e in shooting_spectrum(eps, 10, K, 1e-9)]
    bounds = AsymptoticBounds.for_params(eps)
    s1 = spectral_sum(mus, 1, bounds)
    s2 = spectral_sum(mus, 2, bounds)
    tr = trace_integral(eps)
    hs = hs_norm_sq(eps)
    print(f"eps = {eps}")
    print(f"  trace  {tr:.10f}   sum 1/mu   in [{s1.lo:.6f}, {s1.hi:.6f}]")
    print(f"  HS     {hs:.10f}   sum 1/mu^2 ~ {s2.mid:.10f}  (rel {s2.mid / hs - 1:+.1e})")

# For eps = 1 the trace is ln 2 exactly.
print(f"\nln 2 = {math.log(2):.10f}")
