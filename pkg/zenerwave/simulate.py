"""Displacement fields u(x, t) = (U ∗ K)(x, t) for boundary signals.

Each signal kind has a column responder implementing the ColumnResponse
protocol; fields are assembled column by column on a thread pool.

- Dirac: u = K, with δ content reported symbolically.
- Heaviside: u = ∫₀ᵗ K, the step response; u(0, t) = 1 exactly.
- Sampled: the signal is held constant between samples and its increments
  are superposed on the step response, so δ content of the kernel is
  integrated exactly and u(0, t_m) reproduces the samples.

The t = 0 row of every field is zero, matching u(x, 0) = 0.
"""

from __future__ import annotations

import enum
import logging
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ParameterError
from .inversion import (
    Impulse,
    QuadratureConfig,
    as_grid,
    heaviside_series,
    impulse_train,
    kernel_series,
)
from .oracle import SampledPath
from .params import MaterialParams
from .protocols import ColumnResponse

logger = logging.getLogger(__name__)

# relative tolerance when matching a time grid to a sampling step
GRID_RTOL = 1e-9


class SignalKind(str, enum.Enum):
    DIRAC = "dirac"
    HEAVISIDE = "heaviside"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class BoundarySignal:
    """Displacement prescribed at x = 0.

    Attributes:
        kind: Dirac, Heaviside or sampled.
        samples: Uniform samples from t = 0, required for sampled signals.
        scale: Amplitude multiplier.
    """

    kind: SignalKind
    samples: SampledPath | None = None
    scale: float = 1.0

    def __post_init__(self) -> None:
        if (self.kind is SignalKind.SAMPLED) != (self.samples is not None):
            raise ParameterError("samples are required for sampled signals and only for them")
        if not np.isfinite(self.scale):
            raise ParameterError(f"scale must be finite, got {self.scale!r}")

    @classmethod
    def dirac(cls, scale: float = 1.0) -> BoundarySignal:
        return cls(SignalKind.DIRAC, scale=scale)

    @classmethod
    def heaviside(cls, scale: float = 1.0) -> BoundarySignal:
        return cls(SignalKind.HEAVISIDE, scale=scale)

    @classmethod
    def sampled(cls, values: ArrayLike, dt: float, scale: float = 1.0) -> BoundarySignal:
        return cls(SignalKind.SAMPLED, SampledPath(dt, np.asarray(values, dtype=float)), scale)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> BoundarySignal:
        """Parse ``{"kind": ..., "scale": ..., "dt": ..., "values": [...]}``."""
        if not isinstance(data, Mapping):
            raise ParameterError("signal must be a JSON object")
        try:
            kind = SignalKind(str(data.get("kind", "")).lower())
        except ValueError:
            raise ParameterError(
                f"signal kind must be one of dirac, heaviside, sampled; got {data.get('kind')!r}"
            ) from None
        scale = float(data.get("scale", 1.0))
        if kind is SignalKind.SAMPLED:
            if "dt" not in data or "values" not in data:
                raise ParameterError("sampled signals need 'dt' and 'values'")
            return cls.sampled(data["values"], float(data["dt"]), scale)
        return cls(kind, scale=scale)

    def to_mapping(self) -> dict[str, Any]:
        data: dict[str, Any] = {"kind": self.kind.value, "scale": self.scale}
        if self.samples is not None:
            data["dt"] = self.samples.dt
            data["values"] = [float(v) for v in self.samples.values]
        return data


@dataclass(frozen=True)
class WaveField:
    """Displacement u on an (x, t) grid.

    Attributes:
        xs, ts: Grids; x = 0 and t = 0 are allowed.
        u: Regular part of the displacement, shape (len(xs), len(ts)).
        params_used: Material parameters.
        signal_used: Boundary signal.
        impulses: δ content per x, for Dirac signals on elastic rods and at x = 0.
    """

    xs: NDArray
    ts: NDArray
    u: NDArray
    params_used: MaterialParams
    signal_used: BoundarySignal
    impulses: tuple[tuple[Impulse, ...], ...] = ()

    def rows(self):
        for i, x in enumerate(self.xs):
            for j, t in enumerate(self.ts):
                yield float(x), float(t), float(self.u[i, j])

    def snapshot(self, t: float) -> NDArray:
        """u(·, t) at the grid time closest to t."""
        return self.u[:, int(np.argmin(np.abs(self.ts - t)))]


# --- column responders ---


class DiracResponse:
    """u = K(x, t); δ(t) at x = 0 and elastic wavefronts stay symbolic."""

    kind = SignalKind.DIRAC.value

    def __init__(self, params: MaterialParams, cfg: QuadratureConfig):
        self.params = params
        self.cfg = cfg

    def column(self, x: float, ts: NDArray) -> NDArray:
        out = np.zeros(ts.size)
        positive = ts > 0.0
        if x > 0.0 and np.any(positive):
            out[positive] = kernel_series(x, ts[positive], self.params, self.cfg)
        return out

    def impulses(self, x: float, t_max: float) -> tuple[Impulse, ...]:
        return impulse_train(x, self.params, t_max)


class HeavisideResponse:
    """u = ∫₀ᵗ K(x, θ)dθ."""

    kind = SignalKind.HEAVISIDE.value

    def __init__(self, params: MaterialParams, cfg: QuadratureConfig):
        self.params = params
        self.cfg = cfg

    def column(self, x: float, ts: NDArray) -> NDArray:
        out = np.zeros(ts.size)
        positive = ts > 0.0
        if np.any(positive):
            out[positive] = heaviside_series(x, ts[positive], self.params, self.cfg)
        return out

    def impulses(self, x: float, t_max: float) -> tuple[Impulse, ...]:
        return ()


class SampledResponse:
    """Superposition of step responses weighted by the signal increments."""

    kind = SignalKind.SAMPLED.value

    def __init__(self, samples: SampledPath, params: MaterialParams, cfg: QuadratureConfig):
        self.samples = samples
        self.step = HeavisideResponse(params, cfg)

    def column(self, x: float, ts: NDArray) -> NDArray:
        n = ts.size
        step = self.step.column(x, ts)
        if x == 0.0:
            step[0] = 1.0
        increments = np.diff(np.asarray(self.samples.values[:n], dtype=float), prepend=0.0)
        out = np.convolve(increments, step)[:n]
        out[0] = 0.0
        return out

    def impulses(self, x: float, t_max: float) -> tuple[Impulse, ...]:
        return ()


def _responder(
    signal: BoundarySignal, params: MaterialParams, cfg: QuadratureConfig
) -> ColumnResponse:
    if signal.kind is SignalKind.DIRAC:
        return DiracResponse(params, cfg)
    if signal.kind is SignalKind.HEAVISIDE:
        return HeavisideResponse(params, cfg)
    return SampledResponse(signal.samples, params, cfg)


def _check_sampled_grid(ts: NDArray, samples: SampledPath) -> None:
    if ts[0] != 0.0:
        raise ParameterError("sampled responses need a time grid starting at t = 0")
    if ts.size > len(samples):
        raise ParameterError(
            f"time grid has {ts.size} points but the signal only {len(samples)} samples"
        )
    if ts.size > 1 and not np.allclose(np.diff(ts), samples.dt, rtol=GRID_RTOL, atol=0.0):
        raise ParameterError(f"time grid is not uniform with the signal step dt={samples.dt!r}")


def simulate_field(
    signal: BoundarySignal,
    xs: ArrayLike,
    ts: ArrayLike,
    params: MaterialParams,
    cfg: QuadratureConfig | None = None,
    threads: int = 1,
) -> WaveField:
    """Assemble u(x, t) for any boundary signal, one column per x.

    Raises:
        ParameterError: On bad grids or a sampled signal whose step does not
            match ``ts``.
        ConvergenceError: If a column's quadrature fails; the error names
            the failing cell.
    """
    cfg = cfg or QuadratureConfig()
    xs = as_grid(xs, "xs", allow_zero=True)
    ts = as_grid(ts, "ts", allow_zero=True)
    if params.is_finite_rod and xs[-1] > params.rod_length:
        raise ParameterError(f"xs extend beyond the rod end {params.rod_length!r}")
    if signal.kind is SignalKind.SAMPLED:
        _check_sampled_grid(ts, signal.samples)

    responder = _responder(signal, params, cfg)
    logger.info(
        "simulating %s response: %d positions x %d times, %d thread(s)",
        responder.kind,
        xs.size,
        ts.size,
        threads,
    )
    with ThreadPoolExecutor(max_workers=max(threads, 1)) as pool:
        columns = list(pool.map(lambda x: responder.column(float(x), ts), xs))

    t_max = float(ts[-1])
    impulses = tuple(
        tuple(Impulse(i.delay, signal.scale * i.weight) for i in responder.impulses(float(x), t_max))
        for x in xs
    )
    return WaveField(
        xs=xs,
        ts=ts,
        u=signal.scale * np.vstack(columns),
        params_used=params,
        signal_used=signal,
        impulses=impulses,
    )


def response_dirac(
    x: float, t: float, params: MaterialParams, cfg: QuadratureConfig | None = None
) -> float:
    """u(x, t) for U = δ: the kernel itself (regular part; elastic δ is symbolic)."""
    if not (x > 0.0 and t > 0.0):
        raise ParameterError(f"x and t must be positive, got x={x!r}, t={t!r}")
    return float(kernel_series(x, [t], params, cfg or QuadratureConfig())[0])


def response_heaviside(
    x: float, t: float, params: MaterialParams, cfg: QuadratureConfig | None = None
) -> float:
    """u(x, t) for U = H; u(0, t) = 1 exactly."""
    if not (x >= 0.0 and t > 0.0):
        raise ParameterError(f"need x >= 0 and t > 0, got x={x!r}, t={t!r}")
    return float(heaviside_series(x, [t], params, cfg or QuadratureConfig())[0])


def response_general(
    signal: BoundarySignal,
    xs: ArrayLike,
    ts: ArrayLike,
    params: MaterialParams,
    cfg: QuadratureConfig | None = None,
    threads: int = 1,
) -> WaveField:
    """Field for a sampled boundary signal on a grid sharing its step."""
    if signal.kind is not SignalKind.SAMPLED:
        raise ParameterError("response_general needs a sampled signal")
    return simulate_field(signal, xs, ts, params, cfg, threads)
