"""Oscillatory quadrature along the imaginary axis and Bromwich lines.

Every inversion in zenerwave reduces to one of two folded line integrals over
p ≥ 0 of a transform F sampled at s = s₀ + ip:

- ``cos``:   (e^{s₀t}/π) ∫₀^∞ Re[e^{ipt} F(p)] dp
- ``sin/p``: (1/π) ∫₀^∞ Im[e^{ipt} F(p)] / p dp

The integrals are truncated at a point Λ found from a caller-supplied tail
bound, split into Gauss-Legendre panels whose length follows the oscillation
period, graded geometrically towards p = 0 and refined by panel doubling
until two successive levels agree. Transform samples are shared by all
requested times.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterator, Mapping
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Literal

import numpy as np
from numpy.typing import NDArray

from .errors import ConvergenceError, ParameterError

logger = logging.getLogger(__name__)

Transform = Callable[[NDArray], NDArray]
TailBound = Callable[[NDArray], NDArray]
Weight = Literal["cos", "sin/p"]

# geometric panels between 0 and the first uniform panel
GRADING_LEVELS = 30
# decades scanned per truncation search step
SCAN_PER_DECADE = 16
# nodes x times evaluated per block
CHUNK_ELEMENTS = 2_000_000


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and limits for the line quadratures.

    Attributes:
        abs_tol: Absolute tolerance, also the tail bound at truncation.
        rel_tol: Relative tolerance between successive panel doublings.
        tau_max_cap: Hard upper truncation for half-line integrals.
        panel_max: Largest admissible number of base panels.
        bromwich_s0: Bromwich abscissa; None selects 1/max(t, 1).
        bromwich_p_max: Hard upper truncation for Bromwich integrals.
        refine_depth: Maximum number of panel doublings.
        nodes_per_panel: Gauss-Legendre nodes per panel.
        panel_density: Base panels per half period of the oscillation.
    """

    abs_tol: float = 1e-9
    rel_tol: float = 1e-8
    tau_max_cap: float = 1e7
    panel_max: int = 2_000_000
    bromwich_s0: float | None = None
    bromwich_p_max: float = 1e7
    refine_depth: int = 4
    nodes_per_panel: int = 10
    panel_density: int = 1

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise ParameterError("tolerances must be positive")
        if not self.tau_max_cap >= 1e2:
            raise ParameterError("tau_max_cap must be at least 1e2")
        if not self.bromwich_p_max >= 1e2:
            raise ParameterError("bromwich_p_max must be at least 1e2")
        if self.bromwich_s0 is not None and not self.bromwich_s0 > 0.0:
            raise ParameterError("bromwich_s0 must be positive")
        if self.panel_max < 1 or self.refine_depth < 1:
            raise ParameterError("panel_max and refine_depth must be positive")
        if self.nodes_per_panel < 2 or self.panel_density < 1:
            raise ParameterError("nodes_per_panel must be >= 2 and panel_density >= 1")

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> QuadratureConfig:
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ParameterError(f"unknown quadrature keys: {', '.join(unknown)}")
        return cls(**dict(data))

    def to_mapping(self) -> dict[str, Any]:
        return asdict(self)

    def with_overrides(self, **overrides: Any) -> QuadratureConfig:
        return replace(self, **overrides)

    def abscissa(self, t_max: float) -> float:
        if self.bromwich_s0 is not None:
            return self.bromwich_s0
        return 1.0 / max(t_max, 1.0)


@dataclass(frozen=True)
class LineIntegral:
    """Result of a folded line quadrature for a set of times.

    Attributes:
        values: Integral value per requested time.
        imag_residual: Imaginary part of the unfolded integral per time
            (zero when the conjugate half was not evaluated).
        upper_limit: Truncation point Λ.
        panels: Number of panels at the accepted level.
        doublings: Number of panel doublings performed.
        boundary: F(Λ), for tail corrections by the caller.
    """

    values: NDArray
    imag_residual: NDArray
    upper_limit: float
    panels: int
    doublings: int
    boundary: complex


def find_truncation(tail: TailBound, cap: float, abs_tol: float, start: float = 1.0) -> float:
    """Smallest p beyond which the sampled tail bound stays below abs_tol.

    The bound is scanned on a logarithmic grid up to ``cap``; the crossing
    after the last failing grid point is located by bisection.

    Raises:
        ConvergenceError: If the bound still exceeds abs_tol at ``cap``.
    """
    decades = max(math.log10(cap / start), 1.0)
    grid = np.logspace(math.log10(start), math.log10(cap), int(decades * SCAN_PER_DECADE) + 1)
    with np.errstate(over="ignore", invalid="ignore"):
        bounds = np.asarray(tail(grid), dtype=float)
    failing = np.flatnonzero(~(bounds <= abs_tol))
    if failing.size == 0:
        return float(grid[0])
    last = int(failing[-1])
    if last == grid.size - 1:
        raise ConvergenceError(
            f"tail bound {bounds[-1]:.3e} exceeds abs_tol {abs_tol:.1e} at the truncation cap",
            limit=cap,
        )
    lo, hi = math.log(grid[last]), math.log(grid[last + 1])
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        with np.errstate(over="ignore", invalid="ignore"):
            value = float(np.asarray(tail(np.array([math.exp(mid)])))[0])
        if value <= abs_tol:
            hi = mid
        else:
            lo = mid
    return math.exp(hi)


def panel_edges(upper: float, step: float) -> NDArray:
    """Uniform panels of length ``step`` on [0, upper], graded towards 0."""
    count = max(int(math.ceil(upper / step)), 1)
    uniform = np.linspace(0.0, upper, count + 1)
    first = uniform[1]
    graded = first * np.exp2(-np.arange(GRADING_LEVELS, 0, -1, dtype=float))
    return np.concatenate(([0.0], graded, uniform[1:]))


def _split(edges: NDArray) -> NDArray:
    mids = 0.5 * (edges[:-1] + edges[1:])
    out = np.empty(edges.size + mids.size)
    out[0::2] = edges
    out[1::2] = mids
    return out


def _nodes(edges: NDArray, n: int, budget: int) -> Iterator[tuple[NDArray, NDArray]]:
    x, w = np.polynomial.legendre.leggauss(n)
    per_chunk = max(budget // n, 1)
    for start in range(0, edges.size - 1, per_chunk):
        lo = edges[start : start + per_chunk]
        hi = edges[start + 1 : start + per_chunk + 1]
        lo = lo[: hi.size]
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        yield (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def _integrate(
    transform: Transform,
    edges: NDArray,
    ts: NDArray,
    weight: Weight,
    n: int,
    conjugate: bool,
) -> tuple[NDArray, NDArray]:
    real = np.zeros(ts.size)
    imag = np.zeros(ts.size)
    budget = max(CHUNK_ELEMENTS // ts.size, 4 * n)
    for p, w in _nodes(edges, n, budget):
        f = np.asarray(transform(p), dtype=complex)
        phase = np.outer(ts, p)
        cos_pt, sin_pt = np.cos(phase), np.sin(phase)
        if weight == "cos":
            real += cos_pt @ (w * f.real) - sin_pt @ (w * f.imag)
        else:
            wp = w / p
            real += sin_pt @ (wp * f.real) + cos_pt @ (wp * f.imag)
        if conjugate:
            g = np.asarray(transform(-p), dtype=complex)
            imag += sin_pt @ (w * (f.real - g.real)) + cos_pt @ (w * (f.imag + g.imag))
    return real, imag


def fourier_line(
    transform: Transform,
    ts: NDArray,
    *,
    frequency: float,
    tail: TailBound,
    cap: float,
    cfg: QuadratureConfig,
    s0: float = 0.0,
    weight: Weight = "cos",
    conjugate: bool = False,
) -> LineIntegral:
    """Evaluate a folded line integral for every time in ``ts``.

    Args:
        transform: F as a function of p, sampled at s = s₀ + ip. Must accept
            negative p when ``conjugate`` is set.
        ts: Times, a 1-D array.
        frequency: Largest angular frequency of the integrand in p; base
            panels span π/(frequency·panel_density).
        tail: Bound on the neglected tail as a function of the truncation p.
        cap: Hard upper limit for the truncation search.
        cfg: Quadrature configuration.
        s0: Line abscissa; the result is scaled by e^{s₀t}/π.
        weight: ``"cos"`` or ``"sin/p"`` integrand form.
        conjugate: Also integrate the p < 0 half to measure the imaginary residual.

    Returns:
        LineIntegral with values and diagnostics.

    Raises:
        ConvergenceError: On truncation failure, too many panels or no
            agreement between successive doublings.
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    upper = find_truncation(tail, cap, cfg.abs_tol)
    step = math.pi / (max(frequency, 1.0) * cfg.panel_density)
    edges = panel_edges(upper, step)
    panels = edges.size - 1
    if panels > cfg.panel_max:
        raise ConvergenceError(
            f"{panels} panels needed up to {upper:.3e}, panel_max is {cfg.panel_max}",
            limit=upper,
        )
    logger.debug(
        "line quadrature: upper=%.4g, step=%.4g, panels=%d, times=%d",
        upper,
        step,
        panels,
        ts.size,
    )

    scale = np.exp(s0 * ts) / math.pi
    n = cfg.nodes_per_panel
    coarse, coarse_im = _integrate(transform, edges, ts, weight, n, conjugate)
    for level in range(1, cfg.refine_depth + 1):
        edges = _split(edges)
        fine, fine_im = _integrate(transform, edges, ts, weight, n, conjugate)
        error = np.abs(fine - coarse) * scale
        values = fine * scale
        if np.all(error <= cfg.rel_tol * np.abs(values) + cfg.abs_tol):
            boundary = complex(np.asarray(transform(np.array([upper])))[0])
            return LineIntegral(
                values=values,
                imag_residual=0.5 * fine_im * scale,
                upper_limit=upper,
                panels=edges.size - 1,
                doublings=level,
                boundary=boundary,
            )
        coarse, coarse_im = fine, fine_im
    worst = int(np.argmax(error))
    raise ConvergenceError(
        f"panel doubling did not converge after {cfg.refine_depth} levels "
        f"(change {error[worst]:.3e})",
        t=float(ts[worst]),
        limit=upper,
    )
