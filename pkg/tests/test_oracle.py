"""Tests for the Grünwald-Letnikov operators and the constitutive residual."""

import math

import mpmath
import numpy as np
import pytest
from scipy.special import erfcx

from zenerwave.errors import ParameterError
from zenerwave.oracle import (
    SampledPath,
    constitutive_residual,
    frac_deriv_gl,
    gl_series,
    gl_weights,
    solve_gl,
    sym_deriv,
)
from zenerwave.params import MaterialParams


def linear_path(dt=1e-3, n=1001):
    return SampledPath.from_function(lambda t: t, dt, n)


# --- SampledPath Tests ---


def test_sampled_path_validation():
    path = SampledPath(0.5, [0.0, 1.0, 2.0])
    assert len(path) == 3
    assert np.array_equal(path.times, [0.0, 0.5, 1.0])
    with pytest.raises(ParameterError):
        SampledPath(0.0, [1.0])
    with pytest.raises(ParameterError):
        SampledPath(0.1, [[1.0]])
    with pytest.raises(ParameterError):
        SampledPath(0.1, [1.0, np.nan])


# --- Weight Tests ---


def test_gl_weights_half_order():
    weights = gl_weights(0.5, 4)
    assert weights.real.tolist() == pytest.approx([1.0, -0.5, -0.125, -0.0625, -0.0390625])
    assert np.all(weights.imag == 0.0)


def test_gl_weights_integer_order():
    assert gl_weights(1.0, 3).real.tolist() == pytest.approx([1.0, -1.0, 0.0, 0.0])
    assert gl_weights(0.0, 3).real.tolist() == pytest.approx([1.0, 0.0, 0.0, 0.0])
    with pytest.raises(ParameterError):
        gl_weights(0.5, 0)


def test_gl_weights_are_binomial_coefficients():
    """Test w_k = (−1)^k·binom(η, k) for a complex order."""
    order = complex(0.5, 0.1)
    weights = gl_weights(order, 8)
    for k, w in enumerate(weights):
        expected = (-1) ** k * mpmath.binomial(mpmath.mpc(order.real, order.imag), k)
        assert w == pytest.approx(complex(expected), rel=1e-13, abs=1e-15)


def test_gl_series_scale():
    series = gl_series(0.5, 0.01, 3)
    assert series.scale == pytest.approx(10.0)
    assert series.weights.size == 4


# --- Derivative Tests ---


def test_half_derivative_of_linear_path():
    """Test D^{1/2} t = 2√t/√π within 1%."""
    path = linear_path()
    result = frac_deriv_gl(path, 0.5)
    assert not np.iscomplexobj(result.values)
    assert result.values[-1] == pytest.approx(2.0 / math.sqrt(math.pi), rel=1e-2)


def test_complex_derivative_of_linear_path():
    """Test D^η t = t^{1−η}/Γ(2−η) for η = 0.5 + 0.1i."""
    order = complex(0.5, 0.1)
    path = linear_path()
    result = frac_deriv_gl(path, order)
    assert np.iscomplexobj(result.values)
    expected = complex(1 / mpmath.gamma(2 - order))
    assert result.values[-1] == pytest.approx(expected, rel=1e-2)


def test_semigroup_on_smooth_path():
    path = SampledPath.from_function(lambda t: t**2, 1e-3, 1001)
    twice = frac_deriv_gl(frac_deriv_gl(path, 0.5), 0.5)
    once = frac_deriv_gl(path, 1.0)
    assert twice.values[-1] == pytest.approx(once.values[-1], rel=1e-2)
    assert once.values[-1] == pytest.approx(2.0, rel=1e-2)


def test_symmetric_derivative_is_real_half_sum():
    path = linear_path()
    sym = sym_deriv(path, 0.5, 0.1)
    upper = frac_deriv_gl(path, complex(0.5, 0.1)).values
    assert not np.iscomplexobj(sym.values)
    assert np.allclose(sym.values, upper.real, rtol=1e-12, atol=1e-15)


# --- Residual Tests ---


def test_elastic_residual_compares_paths(elastic):
    path = linear_path(n=50)
    assert constitutive_residual(path, path, elastic) == 0.0
    doubled = SampledPath(path.dt, 2.0 * path.values)
    assert constitutive_residual(doubled, path, elastic) == pytest.approx(1.0)


def test_residual_rejects_mismatch(case1):
    path = linear_path(n=50)
    with pytest.raises(ParameterError, match="length"):
        constitutive_residual(path, linear_path(n=40), case1)
    with pytest.raises(ParameterError, match="step"):
        constitutive_residual(path, linear_path(dt=2e-3, n=50), case1)
    with pytest.raises(ParameterError):
        constitutive_residual(linear_path(n=5), linear_path(n=5), case1)


def test_solved_stress_has_zero_residual(case1):
    """Test the implicit solve inverts the stress-side operator exactly."""
    dt = 1e-2
    strain = SampledPath.from_function(lambda t: np.sin(t), dt, 400)
    rhs = (
        strain.values
        + case1.a2 * frac_deriv_gl(strain, case1.alpha).values
        + 2.0 * case1.b2 * sym_deriv(strain, case1.alpha, case1.beta).values
    )
    sigma = solve_gl(SampledPath(dt, rhs), case1.a1, case1.b1, case1.alpha, case1.beta)
    assert constitutive_residual(sigma, strain, case1) < 1e-10


def test_real_order_relaxation_against_closed_form():
    """Test GL stress for a strain step against 1 + 19·erfcx(√t)."""
    params = MaterialParams(1.0, 20.0, 0.0, 0.0, 0.5, 0.1)
    dt = 1e-3
    strain = SampledPath(dt, np.ones(3001))
    rhs = strain.values + params.a2 * frac_deriv_gl(strain, params.alpha).values
    sigma = solve_gl(SampledPath(dt, rhs), params.a1, 0.0, params.alpha, params.beta)
    t = strain.times[1000:]
    assert np.allclose(sigma.values[1000:], 1.0 + 19.0 * erfcx(np.sqrt(t)), rtol=1e-2)
