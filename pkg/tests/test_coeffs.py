from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosspec.coeffs import ProblemParams, as_params, p, p_prime, w, w_over_p
from bosspec.errors import DomainError

eps_values = st.floats(min_value=0.05, max_value=1.95, allow_nan=False)


@pytest.mark.parametrize("eps", [0.1, 0.5, 1.0, 1.9])
def test_p_endpoints(eps):
    assert p(0.0, eps) == 1.0
    assert p(1.0, eps) == 0.0


def test_p_w_closed_forms():
    assert p(0.5, 1.0) == pytest.approx(0.25, abs=1e-15)
    assert w(0.5, 1.0) == pytest.approx(2.0 / 3.0, rel=1e-15)
    assert w(0.5, 0.5) == pytest.approx(2.0 * 0.25 / 2.25, rel=1e-15)


@pytest.mark.parametrize("eps", [0.1, 1.0, 1.5])
def test_w_diverges_like_inverse_x(eps):
    for x in (1e-4, 1e-6, 1e-8):
        assert x * w(x, eps) == pytest.approx(1.0, rel=5 * x / eps)


@pytest.mark.parametrize("eps", [0.1, 0.5, 1.0, 1.9])
def test_p_prime_at_zero(eps):
    assert p_prime(0.0, eps) == pytest.approx(-2.0 / eps, rel=1e-14)


def test_p_prime_closed_form():
    assert p_prime(0.5, 1.0) == pytest.approx(-1.0, rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(x=st.floats(min_value=1e-3, max_value=0.99), eps=eps_values)
def test_p_prime_matches_central_difference(x, eps):
    h = 1e-6
    fd = (p(x + h, eps) - p(x - h, eps)) / (2 * h)
    assert p_prime(x, eps) == pytest.approx(fd, rel=1e-8, abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(x=st.floats(min_value=1e-6, max_value=1 - 1e-6), eps=eps_values)
def test_w_over_p_is_epsilon_free(x, eps):
    assert w(x, eps) / p(x, eps) == pytest.approx(float(w_over_p(x)), rel=1e-12)


def test_vectorised_matches_scalar():
    xs = np.linspace(0.01, 0.99, 17)
    np.testing.assert_allclose(p(xs, 0.7), [p(float(x), 0.7) for x in xs], rtol=1e-15)
    np.testing.assert_allclose(w(xs, 0.7), [w(float(x), 0.7) for x in xs], rtol=1e-15)


def test_lambda_mu_conversion():
    prm = ProblemParams(0.5)
    assert prm.mu_to_lambda(4.0) == 1.0
    assert prm.lambda_to_mu(1.0) == 4.0
    assert prm.inv_eps == 2.0


@pytest.mark.parametrize("eps", [0.0, -1.0, 2.0, 3.0, math.nan])
def test_epsilon_outside_regime_rejected(eps):
    with pytest.raises(DomainError):
        ProblemParams(eps)


def test_domain_errors():
    with pytest.raises(DomainError):
        p(1.5, 1.0)
    with pytest.raises(DomainError):
        w(0.0, 1.0)
    with pytest.raises(DomainError):
        p_prime(1.0, 1.0)
    with pytest.raises(DomainError):
        p(np.array([0.2, -0.1]), 1.0)


def test_as_params_passthrough():
    prm = ProblemParams(1.0)
    assert as_params(prm) is prm
    assert as_params(1).epsilon == 1.0
