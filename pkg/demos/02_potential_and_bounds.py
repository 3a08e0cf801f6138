#!/usr/bin/env python3
"""The Schroedinger form of the problem and the eigenvalue bounds it yields.

Run with ``python3 demos/02_potential_and_bounds.py``.
"""
from __future__ import annotations

import math

import numpy as np

from bosspec.asymptotics import AsymptoticBounds, lower_bound, upper_envelope, weyl_estimate
from bosspec.liouville import BETA, alpha_min, phi, potential_V
from bosspec.quad import beta_const
from bosspec.shooting import shooting_spectrum

# The change of variable s = psi(x) maps (0, 1) onto (0, beta).
print(f"beta (closed Gauss-Legendre)  = {BETA:.14f}")
print(f"beta (adaptive, substituted)  = {beta_const():.14f}")
print(f"beta (adaptive, direct)       = {beta_const(route='direct'):.14f}")
print(f"phi(beta/2) = {phi(0.5 * BETA):.12f}   (sqrt(2) - 1 = {math.sqrt(2) - 1:.12f})")

# The potential blows up like 3/(4 s^2) on the left and like
# (1/eps^2 - 1/4)/(beta - s)^2 on the right.
for eps in (0.5, 1.0):
    coef = 1 / eps ** 2 - 0.25
    print(f"\neps = {eps}: endpoint ratios (should approach 1)")
    for t in (1e-1, 1e-2, 1e-3):
        s_r = BETA - t
        g = BETA - s_r
        left = potential_V(t, eps) * t * t / 0.75
        right = potential_V(s_r, eps) * g * g / coef
        print(f"  distance {t:7.0e}:  left {left:.12f}   right {right:.12f}")

# alpha = min V gives mu_n >= n^2 pi^2 / beta^2 + alpha.
print("\neps   alpha      mu_1      lower bound   F_1(1)")
for eps in (0.1, 0.5, 1.0, 1.5):
    bounds = AsymptoticBounds.for_params(eps)
    mu1 = shooting_spectrum(eps, 10, 1, 1e-9)[0].mu
    print(f"{eps:4.1f} {alpha_min(eps)[0]:8.4f} {mu1:9.5f} {lower_bound(1, bounds):12.5f}"
          f" {upper_envelope(1, 1.0, bounds):9.3f}")

# Weyl law: lambda_n / (eps n^2 pi^2 / (2 beta^2)) -> 1.
spec = shooting_spectrum(1.0, 10, 40, 1e-9)
ns = np.array([5, 10, 20, 40])
ratio = [spec[n - 1].lam / weyl_estimate(n, 1.0) for n in ns]
print("\nWeyl ratio for eps = 1:", ", ".join(f"n={n}: {r:.5f}" for n, r in zip(ns, ratio)))
