"""Material parameters and thermodynamic admissibility.

The complex-order fractional Zener law

    σ + a₁ D^α σ + b₁ D̄^{α,β} σ = ε + a₂ D^α ε + b₂ D̄^{α,β} ε

is fully described by the dimensionless coefficients (a₁, a₂, b₁, b₂), the
orders (α, β) and, for a finite rod, its length. This module houses those
values, converts physical inputs to the dimensionless form and checks the
restrictions that make storage and loss moduli nonnegative.

Key functions:
- restriction_rhs: Factor multiplying bᵢ in the coefficient inequalities.
- validate: Build a ValidationReport with margins and a verdict.
- nondimensionalize: Convert PhysicalParams to MaterialParams plus (T, L).
"""

from __future__ import annotations

import enum
import math
from collections.abc import Mapping
from dataclasses import asdict, dataclass, field
from typing import Any, NamedTuple

from .errors import ParameterError

PARAM_KEYS = ("a1", "a2", "b1", "b2", "alpha", "beta", "rod_length")
DEFAULT_TD1_TOL = 1e-12


class RestrictionKind(enum.Enum):
    """Which trigonometric factor enters the restriction."""

    CTG = "ctg"
    TG = "tg"


class Verdict(enum.Enum):
    ADMISSIBLE = "Admissible"
    ADMISSIBLE_STRICT = "AdmissibleStrict"
    INADMISSIBLE = "Inadmissible"

    @property
    def is_admissible(self) -> bool:
        return self is not Verdict.INADMISSIBLE


def _check_orders(alpha: float, beta: float) -> None:
    if not (math.isfinite(alpha) and 0.0 < alpha < 1.0):
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha!r}")
    if not (math.isfinite(beta) and beta >= 0.0):
        raise ParameterError(f"beta must be a finite nonnegative number, got {beta!r}")


@dataclass(frozen=True)
class MaterialParams:
    """Dimensionless coefficients of the fractional Zener law.

    Attributes:
        a1, a2: Real-order coefficients of stress and strain.
        b1, b2: Complex-order coefficients of stress and strain.
        alpha: Real part of the derivative order, in (0, 1).
        beta: Imaginary part of the derivative order, positive.
        rod_length: Dimensionless rod length, ``math.inf`` for a semi-infinite rod.
    """

    a1: float
    a2: float
    b1: float
    b2: float
    alpha: float
    beta: float
    rod_length: float = math.inf

    def __post_init__(self) -> None:
        for name in ("a1", "a2", "b1", "b2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ParameterError(f"{name} must be finite and nonnegative, got {value!r}")
        _check_orders(self.alpha, self.beta)
        if self.beta == 0.0:
            raise ParameterError("beta must be positive")
        if not self.rod_length > 0.0:
            raise ParameterError(f"rod_length must be positive, got {self.rod_length!r}")

    @classmethod
    def from_td1(
        cls,
        a1: float,
        a2: float,
        b1: float,
        alpha: float,
        beta: float,
        rod_length: float = math.inf,
    ) -> MaterialParams:
        """Build parameters with b₂ derived so that a₂b₁ − a₁b₂ vanishes.

        Args:
            a1: Stress coefficient, must be positive.
            a2: Strain coefficient.
            b1: Complex-order stress coefficient.
            alpha: Real order.
            beta: Imaginary order.
            rod_length: Dimensionless rod length.

        Returns:
            MaterialParams with ``b2 = a2 * b1 / a1``.
        """
        if not a1 > 0.0:
            raise ParameterError("a1 must be positive to derive b2 from a2*b1/a1")
        return cls(a1, a2, b1, a2 * b1 / a1, alpha, beta, rod_length)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> MaterialParams:
        """Parse the JSON object form of the parameters.

        The mapping must contain exactly the keys a1, a2, b1, b2, alpha, beta
        and rod_length; rod_length is either the string "inf" or a number.
        """
        if not isinstance(data, Mapping):
            raise ParameterError("params must be a JSON object")
        unknown = sorted(set(data) - set(PARAM_KEYS))
        if unknown:
            raise ParameterError(f"unknown parameter keys: {', '.join(unknown)}")
        missing = [key for key in PARAM_KEYS if key not in data]
        if missing:
            raise ParameterError(f"missing parameter keys: {', '.join(missing)}")

        values: dict[str, float] = {}
        for key in PARAM_KEYS:
            raw = data[key]
            if key == "rod_length" and isinstance(raw, str):
                if raw.strip().lower() != "inf":
                    raise ParameterError('rod_length must be "inf" or a positive number')
                values[key] = math.inf
                continue
            if isinstance(raw, bool) or not isinstance(raw, (int, float)):
                raise ParameterError(f"{key} must be a number, got {raw!r}")
            values[key] = float(raw)
        return cls(**values)

    def to_mapping(self) -> dict[str, Any]:
        data: dict[str, Any] = asdict(self)
        if math.isinf(self.rod_length):
            data["rod_length"] = "inf"
        return data

    @property
    def is_elastic(self) -> bool:
        """True when stress and strain operators coincide (Ẽ ≡ 1)."""
        return self.a1 == self.a2 and self.b1 == self.b2

    @property
    def is_finite_rod(self) -> bool:
        return math.isfinite(self.rod_length)

    @property
    def td1_residual(self) -> float:
        return self.a2 * self.b1 - self.a1 * self.b2

    def with_rod_length(self, rod_length: float) -> MaterialParams:
        return MaterialParams(
            self.a1, self.a2, self.b1, self.b2, self.alpha, self.beta, rod_length
        )


def high_frequency_slowness(params: MaterialParams) -> float:
    """Return Re M at infinite frequency, √(a₁/a₂)."""
    if params.a2 == 0.0:
        return 1.0
    return math.sqrt(params.a1 / params.a2)


def wavefront_speed(params: MaterialParams) -> float:
    """Return the high-frequency wave speed √(a₂/a₁) (∞ when a₁ = 0)."""
    slowness = high_frequency_slowness(params)
    return math.inf if slowness == 0.0 else 1.0 / slowness


def restriction_rhs(alpha: float, beta: float, kind: RestrictionKind) -> float:
    """Factor multiplying bᵢ on the right-hand side of a coefficient restriction.

    Computes 2·cosh(βπ/2)·√(1 + (k(απ/2)·tgh(βπ/2))²) with k = ctg or tg.

    Args:
        alpha: Real order in the open interval (0, 1).
        beta: Imaginary order.
        kind: RestrictionKind.CTG for the loss-modulus restriction,
            RestrictionKind.TG for the storage-modulus restriction.

    Returns:
        The factor, always at least 2.

    Raises:
        ParameterError: If alpha is not strictly between 0 and 1.
    """
    _check_orders(alpha, beta)
    half_alpha = alpha * math.pi / 2.0
    half_beta = beta * math.pi / 2.0
    if kind is RestrictionKind.CTG:
        k = math.cos(half_alpha) / math.sin(half_alpha)
    else:
        k = math.tan(half_alpha)
    return 2.0 * math.cosh(half_beta) * math.hypot(1.0, k * math.tanh(half_beta))


@dataclass(frozen=True)
class ValidationReport:
    """Margins and verdict of the thermodynamic restrictions.

    Attributes:
        td1_residual: Value of a₂b₁ − a₁b₂.
        td300_margins: LHS − RHS of the ctg restriction for (a₁, b₁) and (a₂, b₂).
        td30_margins: LHS − RHS of the tg restriction for (a₁, b₁) and (a₂, b₂).
        td20_margin: Loss-modulus restriction on the differences (a₂−a₁, b₂−b₁).
        td3_margin: Storage-modulus restriction on the sums (a₁+a₂, b₁+b₂).
        ordering_ok: Whether a₂ > a₁ (a₂ ≥ a₁ when not strict) and b₂ ≥ b₁.
        strict: Whether margins were required to be strictly positive.
        verdict: Admissible, AdmissibleStrict or Inadmissible.
        failures: Tags of the failed conditions, empty unless inadmissible.
        elastic_degenerate: True for a₁ = a₂, b₁ = b₂ (classical wave equation).
    """

    td1_residual: float
    td300_margins: tuple[float, float]
    td30_margins: tuple[float, float]
    td20_margin: float
    td3_margin: float
    ordering_ok: bool
    strict: bool
    verdict: Verdict
    failures: tuple[str, ...] = field(default_factory=tuple)
    elastic_degenerate: bool = False

    @property
    def margins(self) -> tuple[float, float, float, float]:
        return (*self.td300_margins, *self.td30_margins)

    def to_mapping(self) -> dict[str, Any]:
        return {
            "td1_residual": self.td1_residual,
            "td300_margins": list(self.td300_margins),
            "td30_margins": list(self.td30_margins),
            "td20_margin": self.td20_margin,
            "td3_margin": self.td3_margin,
            "ordering_ok": self.ordering_ok,
            "strict": self.strict,
            "verdict": self.verdict.value,
            "failures": list(self.failures),
            "elastic_degenerate": self.elastic_degenerate,
        }


def validate(
    params: MaterialParams, strict: bool = False, tol: float = DEFAULT_TD1_TOL
) -> ValidationReport:
    """Check the thermodynamic restrictions for a parameter set.

    Args:
        params: Parameters to check.
        strict: Require every restriction margin to be strictly positive and
            a₂ > a₁; otherwise zero margins and a₂ = a₁ are accepted.
        tol: Relative tolerance for the coupling a₂b₁ = a₁b₂, applied as
            |a₂b₁ − a₁b₂| ≤ tol·max(1, a₂b₁).

    Returns:
        ValidationReport with margins and verdict. Inadmissibility is a
        verdict, never an exception.
    """
    rhs_ctg = restriction_rhs(params.alpha, params.beta, RestrictionKind.CTG)
    rhs_tg = restriction_rhs(params.alpha, params.beta, RestrictionKind.TG)
    a1, a2, b1, b2 = params.a1, params.a2, params.b1, params.b2

    residual = params.td1_residual
    td300 = (a1 - b1 * rhs_ctg, a2 - b2 * rhs_ctg)
    td30 = (a1 - b1 * rhs_tg, a2 - b2 * rhs_tg)
    td20 = (a2 - a1) - (b2 - b1) * rhs_ctg
    td3 = (a1 + a2) - (b1 + b2) * rhs_tg
    ordering_ok = (a2 > a1 if strict else a2 >= a1) and b2 >= b1

    if params.is_elastic:
        return ValidationReport(
            td1_residual=residual,
            td300_margins=td300,
            td30_margins=td30,
            td20_margin=td20,
            td3_margin=td3,
            ordering_ok=ordering_ok,
            strict=strict,
            verdict=Verdict.ADMISSIBLE,
            elastic_degenerate=True,
        )

    failures: list[str] = []
    if a2 < a1:
        failures.append("reversed_regime")
    if abs(residual) > tol * max(1.0, a2 * b1):
        failures.append("td1")
    named = (
        ("td300[1]", td300[0]),
        ("td300[2]", td300[1]),
        ("td30[1]", td30[0]),
        ("td30[2]", td30[1]),
    )
    for tag, margin in named:
        if margin < 0.0 or (strict and margin <= 0.0):
            failures.append(tag)
    if not ordering_ok and "reversed_regime" not in failures:
        failures.append("ordering")

    if failures:
        verdict = Verdict.INADMISSIBLE
    elif all(margin > 0.0 for _, margin in named) and a2 > a1:
        verdict = Verdict.ADMISSIBLE_STRICT
    else:
        verdict = Verdict.ADMISSIBLE

    return ValidationReport(
        td1_residual=residual,
        td300_margins=td300,
        td30_margins=td30,
        td20_margin=td20,
        td3_margin=td3,
        ordering_ok=ordering_ok,
        strict=strict,
        verdict=verdict,
        failures=tuple(failures),
    )


@dataclass(frozen=True)
class PhysicalParams:
    """Material data in physical units.

    Attributes:
        E: Modulus of elasticity (Pa).
        rho: Density (kg/m³).
        a1, a2, b1, b2: Coefficients in units of sᵅ.
        alpha, beta: Derivative orders.
        U_scale: Boundary displacement scale (m).
        rod_length_m: Rod length (m), ``math.inf`` for a semi-infinite rod.
    """

    E: float
    rho: float
    a1: float
    a2: float
    b1: float
    b2: float
    alpha: float
    beta: float
    U_scale: float = 1.0
    rod_length_m: float = math.inf

    def __post_init__(self) -> None:
        if not self.E > 0.0:
            raise ParameterError(f"E must be positive, got {self.E!r}")
        if not self.rho > 0.0:
            raise ParameterError(f"rho must be positive, got {self.rho!r}")
        if not self.a2 > 0.0:
            raise ParameterError("a2 must be positive: the time scale a2^(1/alpha) is undefined")
        _check_orders(self.alpha, self.beta)


class Nondimensionalized(NamedTuple):
    params: MaterialParams
    T: float
    L: float


def nondimensionalize(phys: PhysicalParams) -> Nondimensionalized:
    """Convert physical parameters to the dimensionless model.

    Uses T = a₂^{1/α}, L = T·√(E/ρ), āᵢ = aᵢ/Tᵅ and b̄ᵢ = bᵢ/Tᵅ. Since Tᵅ = a₂,
    the scaled coefficients are formed as ratios to a₂ and ā₂ is exactly 1.

    Args:
        phys: Physical parameters.

    Returns:
        (MaterialParams, T in seconds, L in meters).
    """
    T = phys.a2 ** (1.0 / phys.alpha)
    L = T * math.sqrt(phys.E / phys.rho)
    params = MaterialParams(
        a1=phys.a1 / phys.a2,
        a2=1.0,
        b1=phys.b1 / phys.a2,
        b2=phys.b2 / phys.a2,
        alpha=phys.alpha,
        beta=phys.beta,
        rod_length=phys.rod_length_m / L,
    )
    return Nondimensionalized(params, T, L)


def dimensionless_amplitude(phys: PhysicalParams, length_scale: float) -> float:
    """Boundary displacement scale in units of the length scale L."""
    return phys.U_scale / length_scale


PRESETS: dict[str, MaterialParams] = {
    "case1": MaterialParams.from_td1(1.0, 20.0, 0.1, 0.5, 0.1),
    "case1-alpha07": MaterialParams.from_td1(1.0, 20.0, 0.1, 0.7, 0.1),
    "case1-beta03": MaterialParams.from_td1(1.0, 20.0, 0.1, 0.5, 0.3),
}
