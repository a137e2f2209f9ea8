import math

import numpy as np
import pytest

from gaussmin.density import horizontal_gaussian
from gaussmin.flow import (
    AREA_SLACK,
    FlowState,
    GridField,
    VERDICT_CONVERGED,
    VERDICT_MAX_TIME,
    flow_run,
    flow_step,
    grid_weighted_mean_curvature,
    initial_field,
    initial_state,
    refinement_order,
    run_to_time,
    stable_dt,
    weighted_area,
)

HG1 = horizontal_gaussian(1)
HG2 = horizontal_gaussian(2)


def test_grid_field_validation():
    with pytest.raises(ValueError):
        GridField(4.0, np.zeros((2,)))
    with pytest.raises(ValueError):
        GridField(4.0, np.array([0.0, np.inf, 0.0]))
    with pytest.raises(ValueError):
        GridField(4.0, np.zeros((3, 3, 3)))
    fld = GridField(4.0, np.zeros(257))
    assert fld.dx == pytest.approx(8.0 / 256.0)


def test_initial_fields_by_name():
    const = initial_field(1, 4.0, 65, "constant:0.7")
    assert np.all(const.values == 0.7)
    sin = initial_field(1, 4.0, 257, "sinusoid")
    assert sin.oscillation() == pytest.approx(1.0, abs=1e-12)
    bump1 = initial_field(2, 4.0, 33, "random_bump", seed=5)
    bump2 = initial_field(2, 4.0, 33, "random_bump", seed=5)
    assert np.array_equal(bump1.values, bump2.values)
    with pytest.raises(ValueError):
        initial_field(1, 4.0, 33, "vortex")


def test_initial_state_rejects_unstable_dt():
    fld = initial_field(1, 4.0, 65, "sinusoid")
    with pytest.raises(ValueError):
        initial_state(fld, HG1, dt=10.0 * stable_dt(1, fld.dx))


def test_grid_curvature_matches_analytic_on_interior():
    # u = 0.25 x: H = 0 and H_F = -x * 0.25 / sqrt(1 + 0.0625)
    fld = initial_field(1, 4.0, 257, "linear")
    hf = grid_weighted_mean_curvature(fld, HG1)
    x = fld.axis()
    expected = -x * 0.25 / math.sqrt(1.0625)
    interior = slice(2, -2)
    assert np.max(np.abs(hf[interior] - expected[interior])) <= 1e-6


def test_constant_is_exact_fixed_point():
    state = initial_state(initial_field(1, 4.0, 65, "constant:0.7"), HG1)
    stepped = flow_step(state, HG1)
    assert np.array_equal(stepped.field.values, state.field.values)
    result = flow_run(initial_state(initial_field(1, 4.0, 65, "constant:0.7"), HG1), HG1, 10.0)
    assert result.verdict == VERDICT_CONVERGED
    assert result.limit_constant == pytest.approx(0.7, abs=1e-15)
    assert result.state.time == 0.0


def test_first_step_strictly_decreases_area():
    state = initial_state(initial_field(1, 4.0, 257, "sinusoid"), HG1)
    a0 = state.history[0][1]
    stepped = flow_step(state, HG1)
    a1 = stepped.history[-1][1]
    assert a1 < a0


def test_linear_initial_data_flattens():
    state = initial_state(initial_field(1, 4.0, 65, "linear"), HG1)
    osc0 = state.field.oscillation()
    for _ in range(400):
        state = flow_step(state, HG1)
    assert state.field.oscillation() < osc0


def test_flow_run_converges_and_areas_monotone():
    state = initial_state(initial_field(1, 4.0, 65, "sinusoid"), HG1)
    result = flow_run(state, HG1, t_max=50.0, osc_tol=0.005, hf_tol=0.005)
    assert result.verdict == VERDICT_CONVERGED
    areas = np.array([rec[1] for rec in result.state.history])
    assert float(np.max(np.diff(areas))) <= AREA_SLACK
    # converged constant is the odd-symmetric limit 0
    assert abs(result.limit_constant) <= 0.005
    # stationarity implies flatness
    fld = result.state.field
    grad = np.gradient(fld.values, fld.dx)
    assert np.max(np.abs(grad)) <= 10.0 * 0.005 / fld.half_width


def test_flow_run_hits_time_budget():
    state = initial_state(initial_field(1, 4.0, 65, "sinusoid"), HG1)
    result = flow_run(state, HG1, t_max=20.0 * state.dt, osc_tol=1e-9, hf_tol=1e-9)
    assert result.verdict == VERDICT_MAX_TIME
    assert result.state.time >= 20.0 * state.dt


def test_unstable_dt_triggers_rejection_and_halving():
    fld = initial_field(1, 4.0, 65, "sinusoid")
    big = 50.0 * stable_dt(1, fld.dx)
    state = FlowState(field=fld, time=0.0, dt=big, history=[])
    for _ in range(100):
        state = flow_step(state, HG1)
    # the oscillatory instability must have forced at least one halving,
    # and every accepted step kept the area monotone
    assert state.dt < big
    areas = np.array([rec[1] for rec in state.history])
    assert float(np.max(np.diff(areas))) <= AREA_SLACK


def test_odd_symmetry_is_preserved():
    state = initial_state(initial_field(1, 4.0, 129, "sinusoid"), HG1)
    for _ in range(300):
        state = flow_step(state, HG1)
    v = state.field.values
    assert np.max(np.abs(v + v[::-1])) <= 1e-10


def test_two_dimensional_bump_decays():
    fld = initial_field(2, 4.0, 33, "random_bump", seed=0xD1CE)
    osc0 = fld.oscillation()
    state = run_to_time(fld, HG2, 2.0)
    assert state.field.oscillation() < 0.5 * osc0
    areas = np.array([rec[1] for rec in state.history])
    assert float(np.max(np.diff(areas))) <= AREA_SLACK


def test_refinement_order_is_second_order():
    order = refinement_order(HG1, n=1, resolutions=(33, 65, 129), t_end=1.0)
    assert order >= 1.8


def test_run_to_time_lands_exactly():
    fld = initial_field(1, 4.0, 33, "sinusoid")
    state = run_to_time(fld, HG1, 0.5)
    assert state.time == pytest.approx(0.5, abs=1e-12)
