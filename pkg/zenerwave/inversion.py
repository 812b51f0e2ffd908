"""Numerical inversion of the Laplace-domain solution objects.

The displacement of a rod driven at x = 0 is u = U ∗ K, where the solution
kernel K has the transform e^{−sM(s)x} on a semi-infinite rod and the image
bracket (e^{−sMx} − e^{−sM(2l−x)})/(1 − e^{−2sMl}) on a rod of length l.

Key functions:
- kernel_transform: the kernel transform at complex s.
- kernel_infinite, kernel_finite, kernel_series, kernel_grid: K(x, t).
- heaviside_series: the step response ∫₀ᵗ K(x, θ)dθ.
- relaxation_kernel, relaxation_modulus, stress_history: the constitutive
  side, inverted with QUADPACK's Fourier integrals.
- strain_stress_columns: strain and stress at a fixed section for a step
  boundary displacement.

Semi-infinite kernels use the half-line cosine formula on the imaginary axis.
Finite-rod kernels use a Bromwich line s = s₀ + ip folded onto p ≥ 0; the
p < 0 half is also evaluated so the imaginary residual can be checked.
δ content of the elastic kernels is reported symbolically as an impulse
train and never sampled.
"""

from __future__ import annotations

import logging
import math
import warnings
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate
from scipy.interpolate import CubicSpline

from .errors import ConvergenceError, ParameterError
from .modulus import E_tilde_point, M_from_s
from .oracle import SampledPath
from .params import MaterialParams, high_frequency_slowness
from .quadrature import LineIntegral, QuadratureConfig, fourier_line

__all__ = [
    "GaussianProbe",
    "Impulse",
    "KernelGrid",
    "QuadratureConfig",
    "RelaxationKernel",
    "heaviside_series",
    "impulse_train",
    "kernel_finite",
    "kernel_grid",
    "kernel_infinite",
    "kernel_series",
    "kernel_transform",
    "relaxation_kernel",
    "relaxation_modulus",
    "stress_history",
    "strain_stress_columns",
]

logger = logging.getLogger(__name__)

# closest approach to the high-frequency front used in tail bounds
FRONT_GAP = 1e-2
# QUADPACK cycle limit for Fourier integrals to infinity
FOURIER_CYCLES = 100
# logarithmic sample count for interpolating the relaxation modulus
MODULUS_NODES = 72
# image pairs integrated on their own lines ahead of the closed-form remainder
IMAGE_ORDERS = 2


# --- grids and δ content ---


def as_grid(values: ArrayLike, name: str, *, allow_zero: bool = False) -> NDArray:
    """Return a strictly increasing 1-D float grid, rejecting bad input."""
    grid = np.atleast_1d(np.asarray(values, dtype=float))
    if grid.ndim != 1 or grid.size == 0:
        raise ParameterError(f"{name} must be a non-empty 1-D grid")
    if not np.all(np.isfinite(grid)):
        raise ParameterError(f"{name} must be finite")
    if np.any(np.diff(grid) <= 0.0):
        raise ParameterError(f"{name} must be strictly increasing")
    lowest = float(grid[0])
    if lowest < 0.0 or (lowest == 0.0 and not allow_zero):
        raise ParameterError(f"{name} must be positive")
    return grid


@dataclass(frozen=True)
class Impulse:
    """One term weight·δ(t − delay) of a kernel's singular part."""

    delay: float
    weight: float


def impulse_train(x: float, params: MaterialParams, t_max: float) -> tuple[Impulse, ...]:
    """δ content of K(x, ·) on [0, t_max].

    At x = 0 the kernel is δ(t). For elastic parameters it is δ(t − x) on
    a semi-infinite rod and the alternating image series
    Σ_k [δ(t − x − 2kl) − δ(t − (2l − x) − 2kl)] on a rod of length l.
    Viscoelastic kernels at x > 0 carry no δ content.
    """
    if x == 0.0:
        return (Impulse(0.0, 1.0),)
    if not params.is_elastic:
        return ()
    if not params.is_finite_rod:
        return (Impulse(x, 1.0),) if x <= t_max else ()

    length = params.rod_length
    weights: dict[float, float] = {}
    k = 0
    while x + 2.0 * k * length <= t_max:
        for delay, sign in ((x + 2.0 * k * length, 1.0), (2.0 * length - x + 2.0 * k * length, -1.0)):
            if delay <= t_max:
                key = round(delay, 12)
                weights[key] = weights.get(key, 0.0) + sign
        k += 1
    return tuple(Impulse(delay, w) for delay, w in sorted(weights.items()) if w != 0.0)


@dataclass(frozen=True)
class GaussianProbe:
    """Normalised Gaussian test pulse used to observe distributional kernels.

    Attributes:
        width: Standard deviation σ.
        centre: Mean c; defaults to 6σ so the pulse is causal to rounding.
    """

    width: float
    centre: float | None = None

    def __post_init__(self) -> None:
        if not self.width > 0.0:
            raise ParameterError(f"probe width must be positive, got {self.width!r}")

    @property
    def shift(self) -> float:
        return 6.0 * self.width if self.centre is None else self.centre

    def laplace(self, s: NDArray) -> NDArray:
        """Two-sided Laplace transform e^{−sc + σ²s²/2}."""
        return np.exp(-s * self.shift + 0.5 * (self.width * s) ** 2)

    def density(self, t: ArrayLike) -> NDArray:
        t = np.asarray(t, dtype=float)
        z = (t - self.shift) / self.width
        return np.exp(-0.5 * z * z) / (self.width * math.sqrt(2.0 * math.pi))

    def smooth(self, impulses: Sequence[Impulse], ts: ArrayLike) -> NDArray:
        """Convolve an impulse train with the probe."""
        ts = np.asarray(ts, dtype=float)
        out = np.zeros(ts.shape)
        for impulse in impulses:
            out += impulse.weight * self.density(ts - impulse.delay)
        return out


# --- transforms ---


def _bracket(x: float, s: NDArray, params: MaterialParams, length: float) -> NDArray:
    if x == 0.0:
        return np.ones(s.shape, dtype=complex)
    sm = s * np.asarray(M_from_s(s, params), dtype=complex)
    with np.errstate(under="ignore"):
        direct = np.exp(-sm * x)
        if math.isinf(length):
            return direct
        return (direct - np.exp(-sm * (2.0 * length - x))) / (1.0 - np.exp(-2.0 * sm * length))


def kernel_transform(x: float, s: ArrayLike, l: float, params: MaterialParams):
    """Kernel transform ũ(x, s)/Ũ(s) for a rod of length l (``math.inf`` allowed).

    Args:
        x: Position, 0 ≤ x ≤ l.
        s: Laplace variable(s) with Re s > 0.
        l: Rod length.
        params: Material parameters.

    Returns:
        Complex scalar or array matching ``s``.
    """
    if not 0.0 <= x <= l:
        raise ParameterError(f"x must lie in [0, {l}], got {x!r}")
    s_arr = np.asarray(s, dtype=complex)
    value = _bracket(x, s_arr, params, l)
    if np.ndim(s) == 0:
        return complex(value)
    return value


def _check_position(x: float, params: MaterialParams) -> None:
    if not x > 0.0:
        raise ParameterError(f"x must be positive, got {x!r}; x = 0 is the boundary δ")
    if params.is_finite_rod and x > params.rod_length:
        raise ParameterError(f"x={x!r} lies beyond the rod end {params.rod_length!r}")


ImageTerm = Callable[[NDArray], NDArray]


def _image_terms(x: float, length: float) -> list[tuple[tuple[float, ...], ImageTerm]]:
    """Split the finite-rod bracket into image terms, each a function of sM.

    The bracket equals Σ_k [e^{−sM(x+2kl)} − e^{−sM(2l−x+2kl)}]. The first
    IMAGE_ORDERS pairs are returned one by one with their delay, the rest
    in closed form with the two delays that lead it. Every term decays at
    its own rate in p and gets its own truncation and panel length.
    """
    if x == length:
        return []
    terms: list[tuple[tuple[float, ...], ImageTerm]] = []
    for k in range(IMAGE_ORDERS):
        offset = 2.0 * k * length
        for delay, sign in ((x + offset, 1.0), (2.0 * length - x + offset, -1.0)):
            terms.append(((delay,), lambda sm, d=delay, c=sign: c * np.exp(-sm * d)))

    offset = 2.0 * length * IMAGE_ORDERS
    near, far = x + offset, 2.0 * length - x + offset

    def remainder(sm: NDArray) -> NDArray:
        return (np.exp(-sm * near) - np.exp(-sm * far)) / (1.0 - np.exp(-2.0 * sm * length))

    terms.append(((near, far), remainder))
    return terms


def _sum_lines(parts: Sequence[LineIntegral], ts: NDArray) -> LineIntegral:
    if not parts:
        zeros = np.zeros(ts.size)
        return LineIntegral(zeros, zeros.copy(), 0.0, 0, 0, 0j)
    return LineIntegral(
        values=np.sum([part.values for part in parts], axis=0),
        imag_residual=np.sum([part.imag_residual for part in parts], axis=0),
        upper_limit=max(part.upper_limit for part in parts),
        panels=sum(part.panels for part in parts),
        doublings=max(part.doublings for part in parts),
        # a sum of lines has no single F(Λ)
        boundary=0j,
    )


def _frequency(ts: NDArray, delays: Sequence[float], slowness: float, shift: float) -> float:
    """Largest phase rate in p of e^{ipt}F(p) over the requested times."""
    rate = 1.0
    for delay in delays:
        for front in (delay, delay * slowness):
            rate = max(rate, float(np.max(np.abs(ts - shift - front))))
    return rate


def _front_gap(ts: NDArray, x: float, slowness: float, shift: float = 0.0) -> float:
    return max(float(np.min(np.abs(ts - shift - x * slowness))), FRONT_GAP)


def _near_boundary_hint(
    x: float, exc: ConvergenceError, frequency: float, params: MaterialParams, cfg: QuadratureConfig
) -> str:
    """Suggest the smallest usable position after a truncation or panel failure.

    The envelope exponent scales like x·τ^{1−α}, so the truncation point
    scales like x^{−1/(1−α)} and the panel count with it.
    """
    reachable = cfg.panel_max * math.pi / (max(frequency, 1.0) * cfg.panel_density)
    base = "the envelope decays too slowly this close to the boundary"
    if exc.limit is not None and exc.limit > reachable and params.alpha < 1.0:
        x_min = x * (exc.limit / reachable) ** (1.0 - params.alpha)
        return f"{base}; use x >= {x_min:.3g}, a looser abs_tol or the boundary identity at x = 0"
    return f"{base}; use a larger x, a looser abs_tol or the boundary identity at x = 0"


def _reraise(
    exc: ConvergenceError, x: float, ts: NDArray, hint: str | None = None
) -> ConvergenceError:
    """Attach the position and a time to a quadrature failure.

    Truncation and panel failures are shared by every time of a column; the
    latest time sets the panel length, so it is the one reported.
    """
    if exc.t is not None:
        return ConvergenceError(exc.message, x=x, t=exc.t, limit=exc.limit)
    message = exc.message
    if ts.size > 1:
        message += f" (times {ts[0]:.6g} to {ts[-1]:.6g})"
    if hint:
        message += f"; {hint}"
    return ConvergenceError(message, x=x, t=float(ts[-1]), limit=exc.limit)


def _check_residual(
    result: LineIntegral, x: float, ts: NDArray, cfg: QuadratureConfig, lines: int = 1
) -> None:
    # each line contributes up to one tolerance
    allowed = max(lines, 1) * (cfg.abs_tol + cfg.rel_tol * np.abs(result.values))
    excess = np.abs(result.imag_residual) - allowed
    if np.any(excess > 0.0):
        worst = int(np.argmax(excess))
        raise ConvergenceError(
            f"imaginary residual {result.imag_residual[worst]:.3e} exceeds tolerance",
            x=x,
            t=float(ts[worst]),
        )


# --- kernels ---


def _infinite_column(
    x: float, ts: NDArray, params: MaterialParams, cfg: QuadratureConfig
) -> LineIntegral:
    slowness = high_frequency_slowness(params)

    def transform(p: NDArray) -> NDArray:
        return _bracket(x, 1j * p, params, math.inf)

    gap = min(_front_gap(ts, x, slowness), 1.0)
    frequency = _frequency(ts, [x], slowness, 0.0)
    try:
        return fourier_line(
            transform,
            ts,
            frequency=frequency,
            tail=lambda p: np.abs(transform(p)) / gap,
            cap=cfg.tau_max_cap,
            cfg=cfg,
        )
    except ConvergenceError as exc:
        hint = _near_boundary_hint(x, exc, frequency, params, cfg)
        raise _reraise(exc, x, ts, hint) from None


def _bromwich_column(
    x: float,
    ts: NDArray,
    params: MaterialParams,
    cfg: QuadratureConfig,
    *,
    step: bool = False,
    probe: GaussianProbe | None = None,
) -> LineIntegral:
    slowness = high_frequency_slowness(params)
    t_max = float(ts[-1])
    s0 = cfg.abscissa(t_max)
    shift = 0.0 if probe is None else probe.shift
    growth = math.exp(s0 * t_max)

    def line(delays: tuple[float, ...], term: ImageTerm) -> LineIntegral:
        def transform(p: NDArray) -> NDArray:
            s = s0 + 1j * p
            sm = s * np.asarray(M_from_s(s, params), dtype=complex)
            with np.errstate(under="ignore"):
                value = term(sm)
            if step:
                value = value / s
            if probe is not None:
                value = value * probe.laplace(s)
            return value

        gap = min(_front_gap(ts, delays[0], slowness, shift), 1.0)
        frequency = _frequency(ts, delays, slowness, shift)
        try:
            return fourier_line(
                transform,
                ts,
                frequency=frequency,
                tail=lambda p: np.abs(transform(p)) * growth / gap,
                cap=cfg.bromwich_p_max,
                cfg=cfg,
                s0=s0,
                conjugate=True,
            )
        except ConvergenceError as exc:
            hint = _near_boundary_hint(delays[0], exc, frequency, params, cfg)
            raise _reraise(exc, x, ts, hint) from None

    terms = _image_terms(x, params.rod_length)
    result = _sum_lines([line(delays, term) for delays, term in terms], ts)
    logger.debug("bromwich column x=%.6g: %d image lines, %d panels", x, len(terms), result.panels)
    _check_residual(result, x, ts, cfg, lines=len(terms))
    return result


def kernel_series(
    x: float,
    ts: ArrayLike,
    params: MaterialParams,
    cfg: QuadratureConfig | None = None,
    probe: GaussianProbe | None = None,
) -> NDArray:
    """Regular part of K(x, t) for many times sharing one set of transform samples.

    Elastic kernels are pure impulse trains and return zeros unless a probe
    is given; with a probe the smoothed kernel is computed on a Bromwich line
    for every parameter set.

    Raises:
        ConvergenceError: If the quadrature cannot meet the tolerances; the
            error names x and the worst time.
    """
    cfg = cfg or QuadratureConfig()
    _check_position(x, params)
    ts = as_grid(ts, "ts")
    result = _column(x, ts, params, cfg, probe)
    return np.zeros(ts.size) if result is None else result.values


def _column(
    x: float,
    ts: NDArray,
    params: MaterialParams,
    cfg: QuadratureConfig,
    probe: GaussianProbe | None,
) -> LineIntegral | None:
    if probe is None:
        if params.is_elastic:
            return None
        if not params.is_finite_rod:
            return _infinite_column(x, ts, params, cfg)
    return _bromwich_column(x, ts, params, cfg, probe=probe)


def kernel_infinite(
    x: float, t: float, params: MaterialParams, cfg: QuadratureConfig | None = None
) -> float:
    """K(x, t) on the semi-infinite rod by the half-line cosine formula.

    K(x, t) = (1/π)∫₀^∞ Re[e^{iτt − iτM(iτ)x}] dτ, truncated where the
    envelope bound falls below abs_tol. Elastic parameters return 0.0 for
    the regular part; the δ(t − x) term is reported by impulse_train.

    Raises:
        ConvergenceError: If the envelope does not decay before tau_max_cap,
            which happens for small x; use x ≥ 0.3 or the step response.
    """
    params = params.with_rod_length(math.inf)
    if not t > 0.0:
        raise ParameterError(f"t must be positive, got {t!r}")
    return float(kernel_series(x, [t], params, cfg)[0])


def kernel_finite(
    x: float,
    t: float,
    l: float,
    params: MaterialParams,
    cfg: QuadratureConfig | None = None,
    probe: GaussianProbe | None = None,
) -> float:
    """K(x, t) on a rod of length l by Bromwich-line quadrature.

    With a probe the probe-smoothed kernel (K ∗ g)(t) is returned, which is
    finite for every parameter set including the elastic image series.
    """
    params = params.with_rod_length(l)
    if not t > 0.0:
        raise ParameterError(f"t must be positive, got {t!r}")
    return float(kernel_series(x, [t], params, cfg, probe)[0])


def heaviside_series(
    x: float, ts: ArrayLike, params: MaterialParams, cfg: QuadratureConfig | None = None
) -> NDArray:
    """Step response u(x, t) = ∫₀ᵗ K(x, θ)dθ for many times.

    On the semi-infinite rod the time integral is taken under the transform:
    u = 1/2 + (1/π)∫₀^∞ Im[e^{iτt}F(iτ)]/τ dτ, plus the leading
    integration-by-parts term of the neglected tail. Finite rods invert
    F(s)/s on a Bromwich line. Elastic responses are exact staircases.
    """
    cfg = cfg or QuadratureConfig()
    ts = as_grid(ts, "ts")
    if x == 0.0:
        return np.ones(ts.size)
    _check_position(x, params)
    if params.is_elastic:
        out = np.zeros(ts.size)
        for impulse in impulse_train(x, params, float(ts[-1])):
            arrived = ts >= impulse.delay - 1e-12 * max(1.0, impulse.delay)
            out[arrived] += impulse.weight
        return out
    if params.is_finite_rod:
        return _bromwich_column(x, ts, params, cfg, step=True).values

    slowness = high_frequency_slowness(params)
    gap = _front_gap(ts, x, slowness)

    def transform(p: NDArray) -> NDArray:
        return _bracket(x, 1j * p, params, math.inf)

    def tail(p: NDArray) -> NDArray:
        m = np.asarray(M_from_s(1j * p, params), dtype=complex)
        envelope = np.abs(np.exp(-1j * p * m * x))
        return envelope * (1.0 + x * p * np.abs(m - slowness)) / (p * gap) ** 2

    frequency = _frequency(ts, [x], slowness, 0.0)
    try:
        result = fourier_line(
            transform,
            ts,
            frequency=frequency,
            tail=tail,
            cap=cfg.tau_max_cap,
            cfg=cfg,
            weight="sin/p",
        )
    except ConvergenceError as exc:
        hint = _near_boundary_hint(x, exc, frequency, params, cfg)
        raise _reraise(exc, x, ts, hint) from None

    upper = result.upper_limit
    distance = ts - x * slowness
    far = np.abs(distance) >= FRONT_GAP
    correction = np.zeros(ts.size)
    correction[far] = (
        np.imag(1j * np.exp(1j * upper * ts[far]) * result.boundary / (upper * distance[far]))
        / math.pi
    )
    return 0.5 + result.values + correction


# --- grids ---


@dataclass(frozen=True)
class KernelGrid:
    """K(x, t) sampled on a rectangular grid.

    Attributes:
        xs: Positions, strictly increasing and positive.
        ts: Times, strictly increasing and positive.
        values: Regular part of K, shape (len(xs), len(ts)).
        delta_weight: Coefficient of a δ(t) term; zero for every x > 0.
        config_used: Quadrature configuration the grid was computed with.
        analytic: True when the kernel is a pure impulse train and
            ``values`` holds no quadrature output.
        impulses: Impulse train per x (empty for viscoelastic kernels).
        upper_limits: Truncation point used per x.
    """

    xs: NDArray
    ts: NDArray
    values: NDArray
    delta_weight: float
    config_used: QuadratureConfig
    analytic: bool = False
    impulses: tuple[tuple[Impulse, ...], ...] = ()
    upper_limits: tuple[float, ...] = field(default=())

    def rows(self):
        for i, x in enumerate(self.xs):
            for j, t in enumerate(self.ts):
                yield float(x), float(t), float(self.values[i, j])


def kernel_grid(
    xs: ArrayLike,
    ts: ArrayLike,
    params: MaterialParams,
    cfg: QuadratureConfig | None = None,
    threads: int = 1,
    probe: GaussianProbe | None = None,
) -> KernelGrid:
    """Assemble K on an (x, t) grid, one column per x on a thread pool."""
    cfg = cfg or QuadratureConfig()
    xs = as_grid(xs, "xs")
    ts = as_grid(ts, "ts")
    for x in xs:
        _check_position(float(x), params)
    t_max = float(ts[-1])
    impulses = tuple(impulse_train(float(x), params, t_max) for x in xs)

    if params.is_elastic and probe is None:
        return KernelGrid(
            xs=xs,
            ts=ts,
            values=np.zeros((xs.size, ts.size)),
            delta_weight=0.0,
            config_used=cfg,
            analytic=True,
            impulses=impulses,
        )

    def column(x: float) -> tuple[NDArray, float]:
        result = _column(x, ts, params, cfg, probe)
        return result.values, result.upper_limit

    logger.info("kernel grid: %d positions x %d times, %d thread(s)", xs.size, ts.size, threads)
    with ThreadPoolExecutor(max_workers=max(threads, 1)) as pool:
        columns = list(pool.map(column, [float(x) for x in xs]))
    return KernelGrid(
        xs=xs,
        ts=ts,
        values=np.vstack([values for values, _ in columns]),
        delta_weight=0.0,
        config_used=cfg,
        impulses=impulses,
        upper_limits=tuple(limit for _, limit in columns),
    )


# --- strain and stress ---


def strain_stress_columns(
    x: float, ts: ArrayLike, params: MaterialParams, cfg: QuadratureConfig | None = None
) -> tuple[NDArray, NDArray]:
    """Strain and stress at section x for a unit step on a semi-infinite rod.

    Uses ε̃ = −M e^{−sMx} and σ̃ = Ẽε̃ = −e^{−sMx}/M, the latter being the
    equation of motion integrated in x under the transform.

    Returns:
        (strain, stress) sampled at ``ts``.
    """
    cfg = cfg or QuadratureConfig()
    _check_position(x, params)
    if params.is_elastic:
        raise ParameterError("elastic strain and stress are impulsive; see impulse_train")
    if params.is_finite_rod:
        raise ParameterError("strain and stress columns are only available for a semi-infinite rod")
    ts = as_grid(ts, "ts")
    slowness = high_frequency_slowness(params)
    gap = min(_front_gap(ts, x, slowness), 1.0)
    frequency = _frequency(ts, [x], slowness, 0.0)

    def column(factor: Callable[[NDArray], NDArray]) -> NDArray:
        def transform(p: NDArray) -> NDArray:
            s = 1j * p
            return factor(s) * _bracket(x, s, params, math.inf)

        try:
            return fourier_line(
                transform,
                ts,
                frequency=frequency,
                tail=lambda p: np.abs(transform(p)) / gap,
                cap=cfg.tau_max_cap,
                cfg=cfg,
            ).values
        except ConvergenceError as exc:
            hint = _near_boundary_hint(x, exc, frequency, params, cfg)
            raise _reraise(exc, x, ts, hint) from None

    def wave(s: NDArray) -> NDArray:
        return np.asarray(M_from_s(s, params), dtype=complex)

    strain = column(lambda s: -wave(s))
    stress = column(lambda s: -1.0 / wave(s))
    return strain, stress


# --- constitutive side ---


class RelaxationKernel(NamedTuple):
    """L(t) = delta_weight·δ(t) + regular_part."""

    delta_weight: float
    regular_part: float


def _fourier_tail_integral(
    func: Callable[[float], float], t: float, weight: str, cfg: QuadratureConfig
) -> float:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, abserr = integrate.quad(
            func, 0.0, np.inf, weight=weight, wvar=t, epsabs=cfg.abs_tol, limlst=FOURIER_CYCLES
        )
    if not (math.isfinite(value) and math.isfinite(abserr)):
        raise ConvergenceError("Fourier quadrature returned a non-finite value", t=t)
    allowed = cfg.abs_tol + cfg.rel_tol * abs(value)
    if abserr > allowed:
        reason = str(caught[-1].message).splitlines()[0] if caught else "no QUADPACK warning"
        raise ConvergenceError(
            f"Fourier quadrature error estimate {abserr:.3e} exceeds {allowed:.3e} ({reason})",
            t=t,
        )
    if caught:
        logger.warning(
            "Fourier quadrature at t=%.6g: %s (error estimate %.3e within tolerance)",
            t,
            str(caught[-1].message).splitlines()[0],
            abserr,
        )
    return value


def _bromwich_point(
    transform: Callable[[complex], complex], t: float, cfg: QuadratureConfig
) -> float:
    """(1/2πi)∫ e^{st}F(s)ds along Re s = s₀ for a single time."""
    s0 = cfg.abscissa(t)
    scale = math.exp(s0 * t) / math.pi

    cos_part = _fourier_tail_integral(lambda p: transform(complex(s0, p)).real, t, "cos", cfg)
    sin_part = _fourier_tail_integral(lambda p: transform(complex(s0, p)).imag, t, "sin", cfg)
    value = scale * (cos_part - sin_part)

    even = _fourier_tail_integral(
        lambda p: transform(complex(s0, p)).imag + transform(complex(s0, -p)).imag, t, "cos", cfg
    )
    odd = _fourier_tail_integral(
        lambda p: transform(complex(s0, p)).real - transform(complex(s0, -p)).real, t, "sin", cfg
    )
    residual = 0.5 * scale * (even + odd)
    if abs(residual) > cfg.abs_tol + cfg.rel_tol * abs(value):
        raise ConvergenceError(f"imaginary residual {residual:.3e} exceeds tolerance", t=t)
    return value


def _delta_weight(params: MaterialParams) -> float:
    if params.is_elastic:
        return 1.0
    if params.a1 == 0.0:
        raise ParameterError("a1 = 0: the modulus ratio is unbounded and L has no δ decomposition")
    return params.a2 / params.a1


def relaxation_kernel(
    t: float, params: MaterialParams, cfg: QuadratureConfig | None = None
) -> RelaxationKernel:
    """Split L(t) = L⁻¹[Ẽ] into its δ(t) weight and regular part at time t.

    The δ weight is the limit of Ẽ(s) as |s| → ∞, a₂/a₁ when
    a₂b₁ = a₁b₂; the regular part is the Bromwich inversion of Ẽ − a₂/a₁.

    Raises:
        ParameterError: If t ≤ 0 or a₁ = 0.
    """
    cfg = cfg or QuadratureConfig()
    if not t > 0.0:
        raise ParameterError(f"t must be positive, got {t!r}")
    weight = _delta_weight(params)
    if params.is_elastic:
        return RelaxationKernel(1.0, 0.0)
    regular = _bromwich_point(lambda s: E_tilde_point(s, params) - weight, t, cfg)
    return RelaxationKernel(weight, regular)


def relaxation_modulus(
    t: float, params: MaterialParams, cfg: QuadratureConfig | None = None
) -> float:
    """Stress response G(t) = L⁻¹[Ẽ(s)/s] to a unit strain step, for t > 0.

    G(0⁺) = a₂/a₁ and G(t) → 1 as t grows.
    """
    cfg = cfg or QuadratureConfig()
    if not t > 0.0:
        raise ParameterError(f"t must be positive, got {t!r}")
    weight = _delta_weight(params)
    if params.is_elastic:
        return 1.0
    return weight + _bromwich_point(lambda s: (E_tilde_point(s, params) - weight) / s, t, cfg)


def _modulus_interpolant(
    t_lo: float, t_hi: float, params: MaterialParams, cfg: QuadratureConfig
) -> Callable[[NDArray], NDArray]:
    if t_hi <= t_lo * (1.0 + 1e-9):
        value = relaxation_modulus(t_lo, params, cfg)
        return lambda t: np.full(np.shape(t), value)
    nodes = np.geomspace(t_lo, t_hi, MODULUS_NODES)
    samples = np.array([relaxation_modulus(float(t), params, cfg) for t in nodes])
    spline = CubicSpline(np.log(nodes), samples)
    return lambda t: spline(np.log(np.asarray(t, dtype=float)))


def stress_history(
    strain: SampledPath, params: MaterialParams, cfg: QuadratureConfig | None = None
) -> SampledPath:
    """Stress from a sampled strain path by Boltzmann superposition.

    σ(t_m) = G(t_m)ε₀ + Σ_j G((m − j + ½)dt)(ε_j − ε_{j−1}). The relaxation
    modulus is computed at logarithmically spaced times and interpolated
    with a cubic spline in log t.
    """
    cfg = cfg or QuadratureConfig()
    eps = np.asarray(strain.values, dtype=float)
    dt = strain.dt
    if params.is_elastic:
        return SampledPath(dt, eps.copy())
    weight = _delta_weight(params)
    n = eps.size
    sigma = np.empty(n)
    sigma[0] = weight * eps[0]
    if n == 1:
        return SampledPath(dt, sigma)

    t_grid = dt * np.arange(1, n)
    half = dt * (np.arange(n - 1) + 0.5)
    modulus = _modulus_interpolant(float(half[0]), float(t_grid[-1]), params, cfg)
    sigma[1:] = np.convolve(modulus(half), np.diff(eps))[: n - 1]
    if eps[0] != 0.0:
        sigma[1:] += eps[0] * modulus(t_grid)
    logger.debug("stress history: %d samples, dt=%.3g", n, dt)
    return SampledPath(dt, sigma)
