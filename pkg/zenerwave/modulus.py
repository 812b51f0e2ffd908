"""Complex modulus, wave function and the zero-freeness certificate.

Two independent evaluation paths are kept for the same functions:

- the Laplace symbols P̃(s), Q̃(s) at any s with Re s ≥ 0, built from the
  principal logarithm as 1 + sᵅ(a + 2b·cos(β ln s));
- the frequency-domain forms P̂(ω), Q̂(ω) on the imaginary axis, expanded with
  the auxiliary functions f and g.

Key functions:
- f_func, g_func, extremal_values: auxiliary functions and their extrema.
- P_tilde, Q_tilde, E_tilde, M_from_s: Laplace-domain symbols.
- P_hat, Q_hat, E_hat, frequency_response: imaginary-axis evaluation.
- laplace_decomposition: Re/Im of Ẽ at s = ρe^{iφ} in closed form.
- im_M2_decay_exponent: empirical decay rate of Im M²(iτ).
- winding_number: argument-principle certificate for P̃ on the right half-plane.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import EvaluationError, ParameterError
from .params import MaterialParams

logger = logging.getLogger(__name__)

HALF_PI = math.pi / 2.0
# |P̃| below this on the contour invalidates a winding certificate.
ON_CONTOUR_ZERO = 1e-9
# |P̃| or |Q̃| below this is treated as a singular evaluation.
VANISHING = 1e-14


def _scalar_or_array(value: NDArray, like: ArrayLike):
    if np.ndim(like) == 0:
        return value.item()
    return value


# --- auxiliary functions ---


def f_func(tau: ArrayLike, phi: ArrayLike, alpha: float, beta: float):
    """f(τ, φ) = cos τ·cos(αφ)·cosh(βφ) + sin τ·sin(αφ)·sinh(βφ)."""
    tau = np.asarray(tau, dtype=float)
    phi = np.asarray(phi, dtype=float)
    value = np.cos(tau) * np.cos(alpha * phi) * np.cosh(beta * phi) + np.sin(
        tau
    ) * np.sin(alpha * phi) * np.sinh(beta * phi)
    return _scalar_or_array(np.asarray(value), value)


def g_func(tau: ArrayLike, phi: ArrayLike, alpha: float, beta: float):
    """g(τ, φ) = cos τ·sin(αφ)·cosh(βφ) − sin τ·cos(αφ)·sinh(βφ)."""
    tau = np.asarray(tau, dtype=float)
    phi = np.asarray(phi, dtype=float)
    value = np.cos(tau) * np.sin(alpha * phi) * np.cosh(beta * phi) - np.sin(
        tau
    ) * np.cos(alpha * phi) * np.sinh(beta * phi)
    return _scalar_or_array(np.asarray(value), value)


@dataclass(frozen=True)
class ExtremalValues:
    """Extrema of f(·, φ) and g(·, φ) over one period in τ.

    Attributes:
        f_max, f_min: Largest and smallest values of f.
        g_max, g_min: Largest and smallest values of g.
        tau_f_roots: Solutions of tg τ = tg(αφ)tgh(βφ) in [0, 2π), the first
            in (0, π/2) where f = f_max, the second in (π, 3π/2) where f = f_min.
        tau_g_roots: Solutions of tg τ = −ctg(αφ)tgh(βφ) in [0, 2π), the first
            in (π/2, π) where g = g_min, the second in (3π/2, 2π) where g = g_max.
    """

    f_max: float
    f_min: float
    g_max: float
    g_min: float
    tau_f_roots: tuple[float, float]
    tau_g_roots: tuple[float, float]


def extremal_values(alpha: float, beta: float, phi: float) -> ExtremalValues:
    """Closed-form extrema of f and g in τ for a fixed angle φ.

    Raises:
        ParameterError: If phi is outside (0, π/2].
    """
    if not 0.0 < phi <= HALF_PI:
        raise ParameterError(f"phi must lie in (0, pi/2], got {phi!r}")
    ca, sa = math.cos(alpha * phi), math.sin(alpha * phi)
    ch, sh = math.cosh(beta * phi), math.sinh(beta * phi)

    # f = A cos τ + B sin τ, g = C cos τ − D sin τ
    f_amp = math.hypot(ca * ch, sa * sh)
    g_amp = math.hypot(sa * ch, ca * sh)
    theta_f = math.atan2(sa * sh, ca * ch)
    theta_g = math.atan2(ca * sh, sa * ch)
    return ExtremalValues(
        f_max=f_amp,
        f_min=-f_amp,
        g_max=g_amp,
        g_min=-g_amp,
        tau_f_roots=(theta_f, theta_f + math.pi),
        tau_g_roots=(math.pi - theta_g, 2.0 * math.pi - theta_g),
    )


# --- Laplace-domain symbols ---


def _symbol(s: ArrayLike, a: float, b: float, alpha: float, beta: float) -> NDArray:
    s = np.asarray(s, dtype=complex)
    out = np.ones(s.shape, dtype=complex)
    nonzero = s != 0
    log_s = np.log(s[nonzero])
    out[nonzero] = 1.0 + np.exp(alpha * log_s) * (a + 2.0 * b * np.cos(beta * log_s))
    return out


def P_tilde(s: ArrayLike, params: MaterialParams):
    """Strain-side symbol P̃(s) = 1 + a₂sᵅ + b₂(s^{α+iβ} + s^{α−iβ})."""
    value = _symbol(s, params.a2, params.b2, params.alpha, params.beta)
    return _scalar_or_array(value, s)


def Q_tilde(s: ArrayLike, params: MaterialParams):
    """Stress-side symbol Q̃(s) = 1 + a₁sᵅ + b₁(s^{α+iβ} + s^{α−iβ})."""
    value = _symbol(s, params.a1, params.b1, params.alpha, params.beta)
    return _scalar_or_array(value, s)


def _first_vanishing(s: NDArray, values: NDArray) -> complex | None:
    small = np.abs(values) < VANISHING
    if np.any(small):
        return complex(np.broadcast_to(s, values.shape)[small].flat[0])
    return None


def E_tilde(s: ArrayLike, params: MaterialParams):
    """Laplace-domain modulus Ẽ(s) = P̃(s)/Q̃(s)."""
    s_arr = np.asarray(s, dtype=complex)
    p = _symbol(s_arr, params.a2, params.b2, params.alpha, params.beta)
    q = _symbol(s_arr, params.a1, params.b1, params.alpha, params.beta)
    bad = _first_vanishing(s_arr, q)
    if bad is not None:
        raise EvaluationError(bad, "Q vanishes; parameters are not admissible")
    return _scalar_or_array(p / q, s)


def M_squared(s: ArrayLike, params: MaterialParams):
    """M²(s) = Q̃(s)/P̃(s) = 1/Ẽ(s)."""
    s_arr = np.asarray(s, dtype=complex)
    p = _symbol(s_arr, params.a2, params.b2, params.alpha, params.beta)
    q = _symbol(s_arr, params.a1, params.b1, params.alpha, params.beta)
    bad = _first_vanishing(s_arr, p)
    if bad is not None:
        raise EvaluationError(bad, "P vanishes; M is singular at this point")
    return _scalar_or_array(q / p, s)


def M_from_s(s: ArrayLike, params: MaterialParams):
    """Wave function M(s), the principal square root of Q̃/P̃.

    Re M ≥ 0 everywhere, M(0) = 1 exactly and M(s̄) = conj M(s).

    Args:
        s: Laplace variable(s) with Re s ≥ 0.
        params: Material parameters.

    Returns:
        M(s) as a complex scalar or array matching the input.

    Raises:
        EvaluationError: If P̃ vanishes at one of the samples.
    """
    if params.is_elastic:
        return _scalar_or_array(np.ones(np.shape(s), dtype=complex), s)
    m2 = np.asarray(M_squared(np.asarray(s, dtype=complex), params))
    return _scalar_or_array(np.sqrt(m2), s)


# --- imaginary axis ---


def _hat(omega: ArrayLike, a: float, b: float, alpha: float, beta: float) -> NDArray:
    omega = np.asarray(omega, dtype=float)
    out = np.ones(omega.shape, dtype=complex)
    positive = omega > 0
    w = omega[positive]
    tau = beta * np.log(w)
    w_alpha = w**alpha
    f = f_func(tau, HALF_PI, alpha, beta)
    g = g_func(tau, HALF_PI, alpha, beta)
    re = 1.0 + a * w_alpha * math.cos(alpha * HALF_PI) + 2.0 * b * w_alpha * f
    im = a * w_alpha * math.sin(alpha * HALF_PI) + 2.0 * b * w_alpha * g
    out[positive] = re + 1j * im
    return out


def P_hat(omega: ArrayLike, params: MaterialParams):
    """P̂(ω) = P̃(iω) expanded through f and g; P̂(0) = 1."""
    value = _hat(omega, params.a2, params.b2, params.alpha, params.beta)
    return _scalar_or_array(value, omega)


def Q_hat(omega: ArrayLike, params: MaterialParams):
    """Q̂(ω) = Q̃(iω) expanded through f and g; Q̂(0) = 1."""
    value = _hat(omega, params.a1, params.b1, params.alpha, params.beta)
    return _scalar_or_array(value, omega)


def E_hat(omega: ArrayLike, params: MaterialParams):
    """Complex modulus Ê(ω) = P̂(ω)/Q̂(ω); Ê(0) = 1.

    Raises:
        EvaluationError: If Q̂ vanishes at one of the frequencies.
    """
    omega_arr = np.asarray(omega, dtype=float)
    p = _hat(omega_arr, params.a2, params.b2, params.alpha, params.beta)
    q = _hat(omega_arr, params.a1, params.b1, params.alpha, params.beta)
    bad = _first_vanishing(1j * omega_arr, q)
    if bad is not None:
        raise EvaluationError(bad, "Q-hat vanishes; parameters are not admissible")
    return _scalar_or_array(p / q, omega)


@dataclass(frozen=True)
class LaplaceParts:
    """Closed-form split of Ẽ(ρe^{iφ}).

    Re Ẽ = (1 + B + C)/D and Im Ẽ = im_numerator/D. ``C`` uses the
    coefficient 2(a₂b₁ + a₁b₂); ``C_alt`` uses 4a₁b₂, equal to ``C`` when
    a₂b₁ = a₁b₂.
    """

    B: NDArray
    C: NDArray
    C_alt: NDArray
    D: NDArray
    im_numerator: NDArray

    @property
    def real(self) -> NDArray:
        return (1.0 + self.B + self.C) / self.D

    @property
    def imag(self) -> NDArray:
        return self.im_numerator / self.D


def laplace_decomposition(
    rho: ArrayLike, phi: ArrayLike, params: MaterialParams
) -> LaplaceParts:
    """Evaluate the B, C, D split of Ẽ at s = ρe^{iφ}, ρ > 0, φ ∈ [0, π/2]."""
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    a1, a2, b1, b2 = params.a1, params.a2, params.b1, params.b2
    alpha, beta = params.alpha, params.beta

    tau = beta * np.log(rho)
    f = np.asarray(f_func(tau, phi, alpha, beta))
    g = np.asarray(g_func(tau, phi, alpha, beta))
    r_a = rho**alpha
    r_2a = r_a * r_a
    cos_a, sin_a = np.cos(alpha * phi), np.sin(alpha * phi)
    cosh_b, sinh_b = np.cosh(beta * phi), np.sinh(beta * phi)
    ff_gg = f * f + g * g

    B = r_a * ((a1 + a2) * cos_a + 2.0 * (b1 + b2) * f)
    C = r_2a * (a1 * a2 + 2.0 * (a2 * b1 + a1 * b2) * np.cos(tau) * cosh_b + 4.0 * b1 * b2 * ff_gg)
    C_alt = r_2a * (a1 * a2 + 4.0 * a1 * b2 * np.cos(tau) * cosh_b + 4.0 * b1 * b2 * ff_gg)
    D = (
        1.0
        + 2.0 * r_a * (a1 * cos_a + 2.0 * b1 * f)
        + r_2a * (a1 * a1 + 4.0 * a1 * b1 * (cos_a * f + sin_a * g) + 4.0 * b1 * b1 * ff_gg)
    )
    im_numerator = r_a * ((a2 - a1) * sin_a + 2.0 * (b2 - b1) * g) + 2.0 * r_2a * (
        a2 * b1 - a1 * b2
    ) * np.sin(tau) * sinh_b
    return LaplaceParts(B=B, C=C, C_alt=C_alt, D=D, im_numerator=im_numerator)


@dataclass(frozen=True)
class FrequencyResponse:
    """Sampled complex modulus and wave function on the imaginary axis.

    Attributes:
        omegas: Increasing positive dimensionless frequencies.
        E_hat: Ê(ω) per sample.
        M: M(iω) per sample.
    """

    omegas: NDArray
    E_hat: NDArray
    M: NDArray

    @property
    def storage(self) -> NDArray:
        return self.E_hat.real

    @property
    def loss(self) -> NDArray:
        return self.E_hat.imag

    def rows(self):
        for w, e, m in zip(self.omegas, self.E_hat, self.M, strict=True):
            yield float(w), e.real, e.imag, m.real, m.imag


def log_grid(lo: float, hi: float, n: int) -> NDArray:
    return np.logspace(math.log10(lo), math.log10(hi), n)


def frequency_response(omegas: ArrayLike, params: MaterialParams) -> FrequencyResponse:
    """Sample Ê(ω) and M(iω) on a frequency grid.

    Raises:
        ParameterError: If the grid is not strictly increasing and positive.
    """
    omegas = np.asarray(omegas, dtype=float)
    if omegas.ndim != 1 or omegas.size == 0 or omegas[0] <= 0.0:
        raise ParameterError("omegas must be a nonempty 1-D grid of positive values")
    if np.any(np.diff(omegas) <= 0.0):
        raise ParameterError("omegas must be strictly increasing")
    e = np.asarray(E_hat(omegas, params))
    m = np.asarray(M_from_s(1j * omegas, params))
    return FrequencyResponse(omegas=omegas, E_hat=e, M=m)


def im_M2_decay_exponent(
    params: MaterialParams,
    tau_lo: float = 1e3,
    tau_hi: float = 1e6,
    n: int = 200,
) -> float | None:
    """Least-squares slope of log|Im M²(iτ)| against log τ.

    Returns:
        The measured slope, or None when Im M² vanishes identically (elastic
        rod), meaning there is no decay to measure.

    Raises:
        ParameterError: If the sweep spans less than two decades.
    """
    if tau_hi / tau_lo < 1e2:
        raise ParameterError("tau_hi / tau_lo must be at least 1e2")
    if params.is_elastic:
        return None
    taus = log_grid(tau_lo, tau_hi, n)
    im = np.abs(np.asarray(M_squared(1j * taus, params)).imag)
    if np.all(im == 0.0):
        return None
    keep = im > 0.0
    slope, _ = np.polyfit(np.log(taus[keep]), np.log(im[keep]), 1)
    logger.debug("Im M^2 decay slope %.6f over [%g, %g]", slope, tau_lo, tau_hi)
    return float(slope)


# --- argument principle ---


@dataclass(frozen=True)
class WindingCertificate:
    """Zero count of P̃ in the right half-plane annulus ε < |s| < R.

    Attributes:
        winding: Net change of arg P̃ along the closed boundary divided by 2π.
        epsilon: Inner radius.
        R: Outer radius.
        samples: Total number of P̃ evaluations, refinements included.
        min_abs_P: Smallest |P̃| seen on the contour.
        raw: Unrounded winding value.
        valid: False when P̃ nearly vanished on the contour or the raw value
            was not within 10⁻³ of an integer.
    """

    winding: int
    epsilon: float
    R: float
    samples: int
    min_abs_P: float
    raw: float
    valid: bool

    def to_mapping(self) -> dict[str, object]:
        return {
            "winding": self.winding,
            "epsilon": self.epsilon,
            "R": self.R,
            "samples": self.samples,
            "min_abs_P": self.min_abs_P,
            "raw": self.raw,
            "valid": self.valid,
        }


class _PhaseTracker:
    """Accumulates arg P̃ along a parametrised path with bisection refinement."""

    def __init__(self, params: MaterialParams, max_depth: int):
        self.params = params
        self.max_depth = max_depth
        self.samples = 0
        self.min_abs = math.inf

    def _eval(self, s: NDArray) -> NDArray:
        values = _symbol(s, self.params.a2, self.params.b2, self.params.alpha, self.params.beta)
        self.samples += values.size
        if values.size:
            self.min_abs = min(self.min_abs, float(np.min(np.abs(values))))
        return values

    def _refine(
        self,
        path: Callable[[NDArray], NDArray],
        u0: float,
        u1: float,
        p0: complex,
        p1: complex,
        depth: int,
    ) -> float:
        step = float(np.angle(p1 / p0)) if p0 != 0 else 0.0
        if abs(step) <= HALF_PI or depth >= self.max_depth:
            return step
        um = 0.5 * (u0 + u1)
        pm = complex(self._eval(path(np.array([um])))[0])
        return self._refine(path, u0, um, p0, pm, depth + 1) + self._refine(
            path, um, u1, pm, p1, depth + 1
        )

    def change(self, path: Callable[[NDArray], NDArray], n: int) -> float:
        u = np.linspace(0.0, 1.0, n)
        values = self._eval(path(u))
        with np.errstate(divide="ignore", invalid="ignore"):
            steps = np.angle(values[1:] / values[:-1])
        total = 0.0
        for k in np.flatnonzero(np.abs(steps) > HALF_PI):
            steps[k] = self._refine(path, u[k], u[k + 1], values[k], values[k + 1], 0)
        total += float(np.sum(steps))
        return total


def winding_number(
    params: MaterialParams,
    epsilon: float = 1e-3,
    R: float = 1e3,
    n_samples: int = 10_000,
    max_depth: int = 20,
) -> WindingCertificate:
    """Count zeros of P̃ with positive real part by the argument principle.

    The first-quadrant boundary is traversed as the real segment [ε, R], the
    arc of radius R, the imaginary segment from iR down to iε and the arc of
    radius ε back to ε. Conjugate symmetry doubles the quadrant count to the
    whole right half-plane.

    Args:
        params: Material parameters.
        epsilon: Inner radius, 0 < epsilon < 1.
        R: Outer radius, R > 1.
        n_samples: Samples per contour piece, at least 10³.
        max_depth: Bisection depth for steps with |Δarg| > π/2.

    Returns:
        WindingCertificate, winding 0 for admissible parameters.
    """
    if not 0.0 < epsilon < 1.0 < R:
        raise ParameterError("require 0 < epsilon < 1 < R")
    if n_samples < 1000:
        raise ParameterError("n_samples must be at least 1000 per contour piece")

    log_ratio = math.log(R / epsilon)
    pieces: list[Callable[[NDArray], NDArray]] = [
        lambda u: (epsilon * np.exp(u * log_ratio)).astype(complex),
        lambda u: R * np.exp(1j * HALF_PI * u),
        lambda u: 1j * R * np.exp(-u * log_ratio),
        lambda u: epsilon * np.exp(1j * HALF_PI * (1.0 - u)),
    ]
    tracker = _PhaseTracker(params, max_depth)
    quadrant = sum(tracker.change(piece, n_samples) for piece in pieces)

    raw = quadrant / math.pi
    winding = int(round(raw))
    valid = tracker.min_abs >= ON_CONTOUR_ZERO and abs(raw - winding) < 1e-3
    if not valid:
        logger.warning(
            "winding certificate invalid: raw=%.6f, min|P|=%.3e", raw, tracker.min_abs
        )
    return WindingCertificate(
        winding=winding,
        epsilon=epsilon,
        R=R,
        samples=tracker.samples,
        min_abs_P=tracker.min_abs,
        raw=raw,
        valid=valid,
    )


def E_tilde_point(s: complex, params: MaterialParams) -> complex:
    """Scalar Ẽ(s) on the principal branch, for callers that integrate pointwise."""
    if s == 0:
        return 1.0 + 0.0j
    log_s = cmath.log(s)
    s_alpha = cmath.exp(params.alpha * log_s)
    pair = 2.0 * cmath.cos(params.beta * log_s)
    q = 1.0 + s_alpha * (params.a1 + params.b1 * pair)
    if abs(q) < VANISHING:
        raise EvaluationError(s, "Q vanishes; parameters are not admissible")
    return (1.0 + s_alpha * (params.a2 + params.b2 * pair)) / q
