"""Tests for displacement fields under Dirac, Heaviside and sampled boundary signals."""

import numpy as np
import pytest

from zenerwave.errors import ParameterError
from zenerwave.inversion import Impulse, QuadratureConfig, heaviside_series, kernel_series
from zenerwave.params import PRESETS, wavefront_speed
from zenerwave.protocols import ColumnResponse
from zenerwave.simulate import (
    BoundarySignal,
    DiracResponse,
    HeavisideResponse,
    SampledResponse,
    SignalKind,
    response_dirac,
    response_general,
    response_heaviside,
    simulate_field,
)

LOOSE = QuadratureConfig(abs_tol=1e-7, rel_tol=1e-6)
COARSE = QuadratureConfig(abs_tol=1e-5, rel_tol=1e-4)
TIMES = (1.0, 1.5, 2.0)


# --- BoundarySignal Tests ---


def test_signal_from_mapping():
    signal = BoundarySignal.from_mapping({"kind": "Sampled", "dt": 0.1, "values": [0, 1, 1]})
    assert signal.kind is SignalKind.SAMPLED
    assert signal.samples.dt == 0.1
    again = BoundarySignal.from_mapping(signal.to_mapping())
    assert np.array_equal(again.samples.values, signal.samples.values)
    assert BoundarySignal.from_mapping({"kind": "heaviside", "scale": 2}).scale == 2.0


def test_signal_rejects_bad_input():
    with pytest.raises(ParameterError, match="kind"):
        BoundarySignal.from_mapping({"kind": "ramp"})
    with pytest.raises(ParameterError):
        BoundarySignal.from_mapping({"kind": "sampled", "dt": 0.1})
    with pytest.raises(ParameterError):
        BoundarySignal(SignalKind.DIRAC, samples=BoundarySignal.sampled([1.0], 0.1).samples)
    with pytest.raises(ParameterError):
        BoundarySignal.heaviside(scale=float("nan"))


def test_responders_satisfy_protocol(case1):
    cfg = QuadratureConfig()
    signal = BoundarySignal.sampled([0.0, 1.0], 0.1)
    for responder in (
        DiracResponse(case1, cfg),
        HeavisideResponse(case1, cfg),
        SampledResponse(signal.samples, case1, cfg),
    ):
        assert isinstance(responder, ColumnResponse)


# --- Point Response Tests ---


def test_heaviside_at_boundary_is_one(case1):
    assert response_heaviside(0.0, 2.5, case1) == 1.0


def test_point_responses_reject_domain(case1):
    with pytest.raises(ParameterError):
        response_dirac(0.0, 1.0, case1)
    with pytest.raises(ParameterError):
        response_heaviside(1.0, 0.0, case1)


def test_elastic_step_arrives_at_unit_speed(elastic):
    assert response_heaviside(1.0, 0.99, elastic) == 0.0
    assert response_heaviside(1.0, 1.01, elastic) == 1.0
    assert response_dirac(1.0, 2.0, elastic) == 0.0


def test_step_near_boundary_stays_near_one(case1):
    """Test u(0.01, t) within 5% of the unit step for t in [5, 50]."""
    values = heaviside_series(0.01, np.linspace(5.0, 50.0, 10), case1, QuadratureConfig(abs_tol=1e-6))
    assert np.all(np.abs(values - 1.0) < 0.05)


# --- Field Tests ---


def test_field_shape_and_initial_row(case1):
    field = simulate_field(BoundarySignal.heaviside(), [0.0, 1.0], [0.0, 1.0, 2.0], case1, LOOSE)
    assert field.u.shape == (2, 3)
    assert np.all(field.u[:, 0] == 0.0)
    assert np.all(field.u[0, 1:] == 1.0)
    assert len(list(field.rows())) == 6
    assert np.array_equal(field.snapshot(1.1), field.u[:, 1])


def test_field_is_linear_in_scale(case1):
    ts = [0.5, 1.0, 2.0]
    unit = simulate_field(BoundarySignal.heaviside(), [1.0], ts, case1, LOOSE)
    scaled = simulate_field(BoundarySignal.heaviside(scale=-2.5), [1.0], ts, case1, LOOSE)
    assert np.allclose(scaled.u, -2.5 * unit.u, rtol=1e-14, atol=0.0)


def test_dirac_field_reports_impulses(elastic):
    field = simulate_field(BoundarySignal.dirac(scale=3.0), [0.0, 0.5], [0.0, 1.0], elastic)
    assert np.all(field.u == 0.0)
    assert field.impulses == ((Impulse(0.0, 3.0),), (Impulse(0.5, 3.0),))


def test_field_rejects_positions_beyond_rod(case1):
    with pytest.raises(ParameterError):
        simulate_field(BoundarySignal.heaviside(), [0.5, 2.0], [1.0], case1.with_rod_length(1.0))


# --- Sampled Signal Tests ---


def test_sampled_signal_reproduced_at_boundary(case1):
    dt = 0.1
    values = np.sin(np.arange(20) * dt)
    signal = BoundarySignal.sampled(values, dt)
    field = response_general(signal, [0.0], np.arange(20) * dt, case1)
    assert field.u[0, 0] == 0.0
    assert np.allclose(field.u[0, 1:], values[1:], atol=1e-14)


def test_discretised_step_matches_heaviside(case1):
    dt = 0.25
    ts = np.arange(13) * dt
    sampled = response_general(BoundarySignal.sampled(np.ones(13), dt), [1.0], ts, case1, LOOSE)
    step = simulate_field(BoundarySignal.heaviside(), [1.0], ts, case1, LOOSE)
    assert np.allclose(sampled.u, step.u, atol=1e-12)


def test_discretised_pulse_on_elastic_rod(elastic):
    """Test a one-sample pulse on an elastic rod is the step difference."""
    dt = 0.25
    ts = np.arange(9) * dt
    pulse = np.zeros(9)
    pulse[1] = 1.0
    field = response_general(BoundarySignal.sampled(pulse, dt), [0.5], ts, elastic)
    # the pulse spans [dt, 2dt) and arrives at x = 0.5 two steps later
    expected = np.zeros(9)
    expected[3] = 1.0
    assert np.array_equal(field.u[0], expected)


def test_sampled_signal_is_time_shift_invariant(case1):
    dt = 0.25
    ts = np.arange(12) * dt
    ramp = np.minimum(np.arange(12) * dt, 1.0)
    delayed = np.concatenate((np.zeros(2), ramp[:-2]))
    base = response_general(BoundarySignal.sampled(ramp, dt), [1.0], ts, case1, LOOSE)
    shifted = response_general(BoundarySignal.sampled(delayed, dt), [1.0], ts, case1, LOOSE)
    assert np.allclose(shifted.u[0, 2:], base.u[0, :-2], atol=1e-12)


def test_elastic_ramp_translates(elastic):
    """Test an elastic rod carries a sampled ramp unchanged at unit speed."""
    dt = 0.1
    n = 30
    ts = np.arange(n) * dt
    ramp = np.clip(ts - 0.5, 0.0, 1.0)
    field = response_general(BoundarySignal.sampled(ramp, dt), [0.0, 0.5, 1.0], ts, elastic)
    for i, x in enumerate((0.0, 0.5, 1.0)):
        lag = int(round(x / dt))
        assert np.allclose(field.u[i, lag + 1 :], ramp[1 : n - lag], atol=1e-12)


def test_sampled_grid_checks(case1):
    signal = BoundarySignal.sampled(np.ones(5), 0.1)
    with pytest.raises(ParameterError, match="t = 0"):
        response_general(signal, [1.0], [0.1, 0.2], case1)
    with pytest.raises(ParameterError, match="samples"):
        response_general(signal, [1.0], np.arange(6) * 0.1, case1)
    with pytest.raises(ParameterError, match="uniform"):
        response_general(signal, [1.0], [0.0, 0.1, 0.3], case1)
    with pytest.raises(ParameterError, match="sampled"):
        response_general(BoundarySignal.heaviside(), [1.0], [0.0, 0.1], case1)


def test_sampled_response_is_linear(case1):
    dt = 0.25
    ts = np.arange(12) * dt
    first = np.sin(ts)
    second = np.minimum(ts, 1.0)

    def field(values):
        return response_general(BoundarySignal.sampled(values, dt), [1.0], ts, case1, LOOSE).u

    combined = field(2.0 * first - 3.0 * second)
    assert np.allclose(combined, 2.0 * field(first) - 3.0 * field(second), rtol=0.0, atol=1e-12)


def test_single_cell_pulse_follows_kernel(case1):
    """Test a unit-mass pulse over one step tracks K(x, t) to first order in dt."""
    dt = 0.01
    n = 301
    ts = np.arange(n) * dt
    pulse = np.zeros(n)
    pulse[1] = 1.0 / dt
    field = response_general(BoundarySignal.sampled(pulse, dt), [1.0], ts, case1, LOOSE)
    late = ts >= 1.0
    kernel = kernel_series(1.0, ts[late], case1, LOOSE)
    slope = np.max(np.abs(np.diff(kernel))) / dt
    assert np.max(np.abs(field.u[0, late] - kernel)) <= 3.0 * dt * slope + 1e-4


def test_sampled_signal_recovered_near_boundary(case1):
    """Test u(0.01, t) follows a ramp-and-hold signal within 5% once it has settled."""
    dt = 0.25
    ts = np.arange(29) * dt
    ramp = np.minimum(ts, 1.0)
    field = response_general(BoundarySignal.sampled(ramp, dt), [0.01], ts, case1)
    settled = ts >= 6.0
    assert np.all(np.abs(field.u[0, settled] - ramp[settled]) < 0.05)


# --- Dirac Pulse Tests ---


def test_step_response_derivative_is_kernel(case1):
    dt = 0.01
    ts = np.arange(100, 301) * dt
    step = heaviside_series(1.0, ts, case1, LOOSE)
    kernel = kernel_series(1.0, ts[1:-1], case1, LOOSE)
    assert np.allclose((step[2:] - step[:-2]) / (2.0 * dt), kernel, atol=1e-3)


def _front_sweep(params):
    """K(x, t) for TIMES on positions clustered behind each front t·√(a₂/a₁)."""
    speed = wavefront_speed(params)
    xs = [10.0]
    for t in TIMES:
        front = t * speed
        xs.extend(front - np.geomspace(5e-3, front - 1.0, 16))
    xs = np.unique(np.round(xs, 12))
    return xs, np.array([kernel_series(float(x), TIMES, params, COARSE) for x in xs])


@pytest.mark.parametrize("preset", ["case1", "case1-beta03"])
def test_dirac_pulse_trails_front_and_decays(preset):
    params = PRESETS[preset]
    xs, values = _front_sweep(params)
    for j, t in enumerate(TIMES):
        assert xs[np.argmax(values[:, j])] <= t * wavefront_speed(params)
    peaks = values.max(axis=0)
    assert peaks[0] > peaks[1] > peaks[2] > 0.0


def test_higher_real_order_pulse_is_more_localized():
    """Test the α = 0.7 pulse peaks above the α = 0.5 pulse at t = 1."""

    def peak(params):
        xs = wavefront_speed(params) - np.geomspace(2e-3, 0.5, 16)
        cfg = QuadratureConfig(abs_tol=1e-4, rel_tol=1e-4)
        return max(kernel_series(float(x), [1.0], params, cfg)[0] for x in xs)

    assert peak(PRESETS["case1-alpha07"]) > peak(PRESETS["case1"])
