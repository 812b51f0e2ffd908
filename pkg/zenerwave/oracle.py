"""Grünwald-Letnikov discretisation of the fractional operators.

An independent time-domain route to the constitutive law, used to check the
Laplace-domain pipeline on small instances. Accuracy is O(dt); the oracle
certifies structure, not precision.

The complex-order term follows the coefficient convention of the Laplace
symbols: b·(D^{α+iβ} + D^{α−iβ}) = 2b·D̄^{α,β}, with D̄ the symmetrised
half-sum computed by sym_deriv and unit phase constants.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ParameterError
from .params import MaterialParams

logger = logging.getLogger(__name__)

# leading cells excluded from residual norms
BURN_IN = 10


@dataclass(frozen=True)
class SampledPath:
    """Causal signal sampled at t = 0, dt, 2dt, …

    Attributes:
        dt: Sampling step.
        values: Samples starting at t = 0; complex values are permitted for
            intermediate derivatives.
    """

    dt: float
    values: NDArray

    def __post_init__(self) -> None:
        if not self.dt > 0.0:
            raise ParameterError(f"dt must be positive, got {self.dt!r}")
        values = np.asarray(self.values)
        if values.ndim != 1:
            raise ParameterError("path values must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise ParameterError("path values must be finite")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, func, dt: float, n: int) -> SampledPath:
        """Sample ``func`` on n points starting at t = 0."""
        return cls(dt, np.asarray(func(dt * np.arange(n)), dtype=float))

    @property
    def times(self) -> NDArray:
        return self.dt * np.arange(self.values.size)

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class GlSeries:
    """Grünwald-Letnikov weights of one order at a given step."""

    order: complex
    dt: float
    weights: NDArray

    @property
    def scale(self) -> complex:
        return self.dt ** (-self.order)


def gl_weights(order: complex, n: int) -> NDArray:
    """Weights w₀..wₙ of the GL series, w_k = w_{k−1}(1 − (η+1)/k).

    Raises:
        ParameterError: If n < 1.
    """
    if n < 1:
        raise ParameterError(f"need at least one weight beyond w0, got n={n!r}")
    k = np.arange(1, n + 1, dtype=float)
    factors = 1.0 - (complex(order) + 1.0) / k
    return np.concatenate(([1.0 + 0.0j], np.cumprod(factors)))


def gl_series(order: complex, dt: float, n: int) -> GlSeries:
    return GlSeries(complex(order), dt, gl_weights(order, n))


def _apply(path: SampledPath, order: complex) -> NDArray:
    n = len(path)
    if n == 1:
        return path.values * path.dt ** (-complex(order))
    series = gl_series(order, path.dt, n - 1)
    return series.scale * np.convolve(series.weights, path.values)[:n]


def frac_deriv_gl(path: SampledPath, order: complex) -> SampledPath:
    """(D^η u)_m = dt^{−η} Σ_{k=0}^{m} w_k u_{m−k}.

    Real orders on real paths return real values; complex orders return
    complex values.
    """
    values = _apply(path, order)
    if complex(order).imag == 0.0 and not np.iscomplexobj(path.values):
        values = values.real
    return SampledPath(path.dt, values)


def sym_deriv(path: SampledPath, alpha: float, beta: float) -> SampledPath:
    """½(D^{α+iβ} + D^{α−iβ}) of a real path; real by conjugate symmetry."""
    upper = _apply(path, complex(alpha, beta))
    lower = _apply(path, complex(alpha, -beta))
    half_sum = 0.5 * (upper + lower)
    residual = float(np.max(np.abs(half_sum.imag))) if half_sum.size else 0.0
    logger.debug("symmetric derivative imaginary residual %.3e", residual)
    return SampledPath(path.dt, half_sum.real)


def _operator(path: SampledPath, a: float, b: float, alpha: float, beta: float) -> NDArray:
    out = np.asarray(path.values, dtype=float).copy()
    if a != 0.0:
        out += a * frac_deriv_gl(path, alpha).values
    if b != 0.0:
        out += 2.0 * b * sym_deriv(path, alpha, beta).values
    return out


def constitutive_residual(
    sigma: SampledPath,
    epsilon: SampledPath,
    params: MaterialParams,
    burn_in: int = BURN_IN,
) -> float:
    """Relative sup-norm defect of the constitutive law over interior cells.

    Computes ‖(1 + a₁Dᵅ + b₁(D^{α+iβ}+D^{α−iβ}))σ − (1 + a₂Dᵅ + b₂(…))ε‖
    normalised by the sup-norm of the right-hand side.

    Raises:
        ParameterError: On length or step mismatch.
    """
    if len(sigma) != len(epsilon):
        raise ParameterError(f"length mismatch: {len(sigma)} stress vs {len(epsilon)} strain samples")
    if abs(sigma.dt - epsilon.dt) > 1e-12 * sigma.dt:
        raise ParameterError(f"step mismatch: {sigma.dt!r} vs {epsilon.dt!r}")
    if len(sigma) <= burn_in:
        raise ParameterError(f"need more than {burn_in} samples for a residual")
    if params.is_elastic:
        lhs = np.asarray(sigma.values, dtype=float)
        rhs = np.asarray(epsilon.values, dtype=float)
    else:
        lhs = _operator(sigma, params.a1, params.b1, params.alpha, params.beta)
        rhs = _operator(epsilon, params.a2, params.b2, params.alpha, params.beta)
    interior = slice(burn_in, None)
    scale = float(np.max(np.abs(rhs[interior])))
    defect = float(np.max(np.abs(lhs[interior] - rhs[interior])))
    if scale == 0.0:
        return defect
    return defect / scale


def solve_gl(
    rhs: SampledPath, a: float, b: float, alpha: float, beta: float
) -> SampledPath:
    """Solve y + a·Dᵅy + b·(D^{α+iβ} + D^{α−iβ})y = rhs by implicit GL stepping."""
    n = len(rhs)
    dt = rhs.dt
    coeff = np.zeros(n)
    coeff[0] = 1.0
    if a != 0.0:
        series = gl_series(alpha, dt, max(n - 1, 1))
        coeff += a * (series.scale * series.weights).real[:n]
    if b != 0.0:
        series = gl_series(complex(alpha, beta), dt, max(n - 1, 1))
        coeff += 2.0 * b * (series.scale * series.weights).real[:n]

    y = np.zeros(n)
    source = np.asarray(rhs.values, dtype=float)
    for m in range(n):
        history = float(np.dot(coeff[1 : m + 1], y[m - 1 :: -1])) if m else 0.0
        y[m] = (source[m] - history) / coeff[0]
    return SampledPath(dt, y)
