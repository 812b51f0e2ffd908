"""Tests for material parameters and the thermodynamic restrictions."""

import math

import mpmath
import numpy as np
import pytest

from zenerwave.errors import ParameterError
from zenerwave.params import (
    PRESETS,
    MaterialParams,
    PhysicalParams,
    RestrictionKind,
    Verdict,
    dimensionless_amplitude,
    high_frequency_slowness,
    nondimensionalize,
    restriction_rhs,
    validate,
    wavefront_speed,
)

CASE1 = MaterialParams(a1=1.0, a2=20.0, b1=0.1, b2=2.0, alpha=0.5, beta=0.1)


# --- MaterialParams Tests ---


def test_field_domains_rejected():
    with pytest.raises(ParameterError):
        MaterialParams(-1.0, 20.0, 0.1, 2.0, 0.5, 0.1)
    with pytest.raises(ParameterError):
        MaterialParams(1.0, 20.0, 0.1, 2.0, 1.0, 0.1)
    with pytest.raises(ParameterError):
        MaterialParams(1.0, 20.0, 0.1, 2.0, 0.0, 0.1)
    with pytest.raises(ParameterError):
        MaterialParams(1.0, 20.0, 0.1, 2.0, 0.5, 0.0)
    with pytest.raises(ParameterError):
        MaterialParams(1.0, 20.0, 0.1, 2.0, 0.5, 0.1, rod_length=0.0)


def test_from_td1_derives_b2():
    """Test from_td1 sets b₂ = a₂b₁/a₁."""
    params = MaterialParams.from_td1(1.0, 20.0, 0.1, 0.5, 0.1)
    assert params.b2 == pytest.approx(2.0)
    assert params.td1_residual == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ParameterError):
        MaterialParams.from_td1(0.0, 20.0, 0.1, 0.5, 0.1)


def test_from_td1_residual_within_four_ulp():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        a1 = float(rng.uniform(0.1, 10.0))
        a2 = a1 * float(rng.uniform(1.0, 50.0))
        b1 = float(rng.uniform(0.0, 0.5)) * a1
        params = MaterialParams.from_td1(a1, a2, b1, 0.5, 0.1)
        assert abs(params.td1_residual) <= 4.0 * math.ulp(a2 * b1)


def test_from_mapping_round_trip_and_schema():
    data = {"a1": 1, "a2": 20, "b1": 0.1, "b2": 2, "alpha": 0.5, "beta": 0.1, "rod_length": "inf"}
    params = MaterialParams.from_mapping(data)
    assert params == CASE1
    assert params.to_mapping()["rod_length"] == "inf"
    assert MaterialParams.from_mapping({**data, "rod_length": 10}).rod_length == 10.0

    missing = dict(data)
    del missing["alpha"]
    with pytest.raises(ParameterError, match="alpha"):
        MaterialParams.from_mapping(missing)
    with pytest.raises(ParameterError, match="unknown"):
        MaterialParams.from_mapping({**data, "gamma": 1})
    with pytest.raises(ParameterError):
        MaterialParams.from_mapping({**data, "a1": True})
    with pytest.raises(ParameterError):
        MaterialParams.from_mapping({**data, "rod_length": "long"})


def test_elastic_and_rod_flags():
    elastic = MaterialParams(1.0, 1.0, 0.2, 0.2, 0.5, 0.1)
    assert elastic.is_elastic
    assert not CASE1.is_elastic
    assert not CASE1.is_finite_rod
    assert CASE1.with_rod_length(10.0).is_finite_rod


def test_speeds():
    assert high_frequency_slowness(CASE1) == pytest.approx(math.sqrt(1 / 20))
    assert wavefront_speed(CASE1) == pytest.approx(math.sqrt(20))
    assert wavefront_speed(MaterialParams(0.0, 1.0, 0.0, 0.0, 0.5, 0.1)) == math.inf


def test_presets_are_admissible():
    for name, params in PRESETS.items():
        assert validate(params).verdict is Verdict.ADMISSIBLE_STRICT, name


# --- restriction_rhs Tests ---


def test_restriction_rhs_symmetric_at_half():
    """Test ctg and tg factors agree at α = 1/2."""
    for beta in (0.01, 0.1, 0.7, 2.0):
        ctg = restriction_rhs(0.5, beta, RestrictionKind.CTG)
        tg = restriction_rhs(0.5, beta, RestrictionKind.TG)
        assert ctg == pytest.approx(tg, rel=1e-14)
        expected = 2 * math.cosh(beta * math.pi / 2) * math.sqrt(1 + math.tanh(beta * math.pi / 2) ** 2)
        assert ctg == pytest.approx(expected, rel=1e-14)


def test_restriction_rhs_small_beta_limit():
    assert restriction_rhs(0.3, 1e-9, RestrictionKind.CTG) == pytest.approx(2.0, rel=1e-12)
    assert restriction_rhs(0.3, 0.0, RestrictionKind.TG) == 2.0


def test_restriction_rhs_high_precision():
    """Test the closed form against a 60-digit evaluation."""
    mpmath.mp.dps = 60
    alpha, beta = mpmath.mpf("0.5"), mpmath.mpf("0.1")
    half_beta = beta * mpmath.pi / 2
    k = mpmath.cot(alpha * mpmath.pi / 2)
    exact = 2 * mpmath.cosh(half_beta) * mpmath.sqrt(1 + (k * mpmath.tanh(half_beta)) ** 2)
    value = restriction_rhs(0.5, 0.1, RestrictionKind.CTG)
    assert value == pytest.approx(float(exact), rel=1e-15)


def test_restriction_rhs_at_least_two_and_increasing_in_beta():
    rng = np.random.default_rng(11)
    betas = np.sort(rng.uniform(0.0, 3.0, 100))
    for alpha in rng.uniform(0.02, 0.98, 10):
        for kind in RestrictionKind:
            values = np.array([restriction_rhs(float(alpha), float(b), kind) for b in betas])
            assert np.all(values >= 2.0)
            assert np.all(np.diff(values) >= 0.0)


def test_restriction_rhs_rejects_orders():
    with pytest.raises(ParameterError):
        restriction_rhs(1.0, 0.1, RestrictionKind.CTG)
    with pytest.raises(ParameterError):
        restriction_rhs(0.0, 0.1, RestrictionKind.TG)


# --- validate Tests ---


def test_case1_admissible_strict():
    report = validate(CASE1)
    assert report.verdict is Verdict.ADMISSIBLE_STRICT
    assert report.failures == ()
    assert all(margin > 0 for margin in report.margins)


def test_scaled_b1_inadmissible():
    """Test b₁ scaled by 50 breaks the restrictions."""
    report = validate(MaterialParams(1.0, 20.0, 5.0, 2.0, 0.5, 0.1))
    assert report.verdict is Verdict.INADMISSIBLE
    assert "td1" in report.failures
    assert "td300[1]" in report.failures


def test_td300_failure_with_td1_satisfied():
    report = validate(MaterialParams(1.0, 20.0, 5.0, 100.0, 0.5, 0.1))
    assert report.verdict is Verdict.INADMISSIBLE
    assert report.td1_residual == 0.0
    assert "td300[1]" in report.failures


def test_real_order_zener_admissible():
    report = validate(MaterialParams(1.0, 20.0, 0.0, 0.0, 0.5, 0.1))
    assert report.verdict.is_admissible
    assert report.td1_residual == 0.0


def test_td1_violation_reports_residual():
    report = validate(MaterialParams(1.0, 20.0, 0.1, 1.5, 0.5, 0.1))
    assert report.verdict is Verdict.INADMISSIBLE
    assert report.failures == ("td1",)
    assert report.td1_residual == pytest.approx(0.5)


def test_reversed_regime():
    report = validate(MaterialParams(20.0, 1.0, 2.0, 0.1, 0.5, 0.1))
    assert report.verdict is Verdict.INADMISSIBLE
    assert "reversed_regime" in report.failures


def test_elastic_degenerate_always_admissible():
    report = validate(MaterialParams(1.0, 1.0, 0.9, 0.9, 0.5, 0.1), strict=True)
    assert report.verdict is Verdict.ADMISSIBLE
    assert report.elastic_degenerate


def test_strict_requires_positive_margins():
    """Test a zero margin is Admissible but fails under strict."""
    rhs = restriction_rhs(0.3, 0.1, RestrictionKind.CTG)
    params = MaterialParams(rhs, 20.0 * rhs, 1.0, 20.0, 0.3, 0.1)
    assert validate(params).td300_margins == (0.0, 0.0)
    assert validate(params).verdict is Verdict.ADMISSIBLE
    assert validate(params, strict=True).verdict is Verdict.INADMISSIBLE


def test_margins_affine_in_scale_and_verdict_flips_once():
    """Test scaling (b₁, b₂) by λ moves every margin linearly and flips the verdict at one λ."""

    def scaled(lam):
        return MaterialParams(1.0, 20.0, 0.1 * lam, 2.0 * lam, 0.5, 0.1)

    margins = [np.array(validate(scaled(lam)).margins) for lam in (1.0, 2.0, 3.0)]
    assert np.allclose(margins[2] - margins[1], margins[1] - margins[0], rtol=0.0, atol=1e-12)
    rhs = max(restriction_rhs(0.5, 0.1, kind) for kind in RestrictionKind)
    critical = 1.0 / (0.1 * rhs)
    assert validate(scaled(critical * (1.0 - 1e-9))).verdict is Verdict.ADMISSIBLE_STRICT
    assert validate(scaled(critical * (1.0 + 1e-9))).verdict is Verdict.INADMISSIBLE
    assert validate(scaled(50.0)).verdict is Verdict.INADMISSIBLE


def test_supplementary_margins_follow_from_primary():
    report = validate(CASE1)
    assert report.td20_margin == pytest.approx(report.td300_margins[1] - report.td300_margins[0])
    assert report.td3_margin == pytest.approx(sum(report.td30_margins))
    mapping = report.to_mapping()
    assert mapping["verdict"] == "AdmissibleStrict"


def test_random_admissible_sets_have_nonnegative_supplementary_margins(admissible_sets):
    for params in admissible_sets(50, seed=7):
        report = validate(params)
        assert report.td20_margin >= 0.0
        assert report.td3_margin >= 0.0


# --- nondimensionalize Tests ---


def test_time_scale_and_unit_a2():
    phys = PhysicalParams(E=1.0, rho=1.0, a1=4.0, a2=16.0, b1=0.4, b2=1.6, alpha=0.5, beta=0.1)
    params, T, L = nondimensionalize(phys)
    assert T == pytest.approx(256.0)
    assert params.a2 == 1.0
    assert params.a1 == pytest.approx(0.25)
    assert L == pytest.approx(256.0)


def test_equal_coefficients_scale_identically():
    phys = PhysicalParams(E=1.0, rho=1.0, a1=3.0, a2=3.0, b1=0.0, b2=0.0, alpha=0.4, beta=0.2)
    params, _, _ = nondimensionalize(phys)
    assert params.a1 == params.a2 == 1.0


def test_length_scale_and_amplitude():
    phys = PhysicalParams(
        E=2e9,
        rho=1e3,
        a1=0.5,
        a2=1.0,
        b1=0.0,
        b2=0.0,
        alpha=0.5,
        beta=0.1,
        U_scale=0.01,
        rod_length_m=2828.42712474619,
    )
    params, T, L = nondimensionalize(phys)
    assert T == 1.0
    assert L == pytest.approx(1414.2135623730951)
    assert params.rod_length == pytest.approx(2.0)
    assert dimensionless_amplitude(phys, L) == pytest.approx(0.01 / L)


def test_rejects_zero_a2():
    with pytest.raises(ParameterError):
        PhysicalParams(E=1.0, rho=1.0, a1=0.0, a2=0.0, b1=0.0, b2=0.0, alpha=0.5, beta=0.1)
