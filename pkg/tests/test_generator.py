import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from handwriting_dmp.generator import (
    IntegrationBlowupError,
    RolloutRequest,
    initial_acceleration,
    rollout,
)
from handwriting_dmp.kernels import build_bank, forcing_value
from handwriting_dmp.learner import Formulation, TransformParams, fit_dmp, models_from_arrays, with_formulation
from handwriting_dmp.phase import PhaseConfig, PhaseKind
from handwriting_dmp.trajectory import euclidean_error

ORIG = TransformParams(25.0, 6.25, Formulation.ORIGINAL)
STAR = TransformParams(25.0, 6.25, Formulation.GOAL_ROBUST)


def _model(params, weights, y0, g, n=10, T=1.0, dt=0.01, kind=PhaseKind.LINEAR):
    return models_from_arrays(build_bank(n), PhaseConfig(kind, alpha_x=3.0, T=T), params,
                              weights, y0, g, dt, T)


def test_zero_weights_converge_to_goal():
    model = _model(STAR, np.zeros(10), [0.0], [1.0], T=0.5)
    r = rollout(model, duration=2.0)
    assert abs(r.positions[-1, 0] - 1.0) < 1e-3
    assert r.positions.shape == (201, 1)


@pytest.mark.parametrize("params", [ORIG, STAR])
def test_zero_forcing_convergence_both_formulations(params):
    model = _model(params, np.zeros((10, 2)), [0.1, -0.3], [0.4, 0.2], T=0.5)
    r = rollout(model, duration=2.0)
    assert np.all(np.abs(r.positions[-1] - model.g) < 1e-3 * np.abs(model.g - model.y0))


def test_original_stays_at_start_when_goal_equals_start(rng):
    model = _model(ORIG, rng.normal(scale=50, size=10), [0.3], [0.9])
    r = rollout(model, g=[0.3])
    assert np.all(r.positions == 0.3)
    assert r.degenerate == (0,)


def test_round_trip_on_letter(letter_a):
    model = fit_dmp(letter_a)
    r = rollout(model)
    assert r.positions.shape == letter_a.positions.shape
    assert euclidean_error(r.positions, letter_a.positions) < 1e-3
    np.testing.assert_array_equal(r.positions[0], letter_a.positions[0])


def test_request_object_equals_keyword_form(letter_a):
    model = fit_dmp(letter_a)
    a = rollout(RolloutRequest(model, g=[0.03, 0.01]))
    b = rollout(model, g=[0.03, 0.01])
    np.testing.assert_array_equal(a.positions, b.positions)


def test_euler_update_order():
    model = _model(STAR, np.ones(10), [0.0], [1.0])
    r = rollout(model)
    dt = model.dt
    np.testing.assert_allclose(r.positions[1:], r.positions[:-1] + r.velocities[:-1] * dt, rtol=0, atol=1e-15)
    np.testing.assert_allclose(r.velocities[1:], r.velocities[:-1] + r.accelerations[:-1] * dt, rtol=0, atol=1e-14)
    assert r.velocities[0, 0] == 0.0


def test_initial_velocity_option():
    model = _model(STAR, np.zeros(10), [0.0], [1.0])
    r = rollout(model, v0=[0.5])
    assert r.velocities[0, 0] == 0.5


def test_override_dimension_mismatch(letter_a):
    model = fit_dmp(letter_a)
    with pytest.raises(ValueError, match="goal override"):
        rollout(model, g=[1.0])


def test_divergence_reports_step():
    model = _model(STAR, np.zeros(10), [0.0], [1.0], dt=0.5, T=1.0)
    with pytest.raises(IntegrationBlowupError) as info:
        rollout(model, duration=200.0)
    assert info.value.step > 0
    assert str(info.value.step) in str(info.value)


def test_initial_acceleration_goal_robust_cancels(rng):
    w = rng.normal(size=10)
    model = _model(STAR, w, [0.1], [0.5])
    f0 = forcing_value(model.bank, w, 1.0)
    np.testing.assert_allclose(initial_acceleration(model), STAR.stiffness * f0, rtol=1e-14)
    a = initial_acceleration(model, g=[0.5])
    b = initial_acceleration(model, g=[0.51])
    assert abs(a[0] - b[0]) <= 1e-12


def test_initial_acceleration_original_is_linear_in_offset(rng):
    w = rng.normal(size=10)
    model = _model(ORIG, w, [0.1], [0.5])
    f0 = forcing_value(model.bank, w, 1.0)
    expected = ORIG.stiffness * 0.4 + 0.4 * f0
    assert initial_acceleration(model)[0] == pytest.approx(expected, abs=1e-12)


def test_initial_acceleration_matches_first_rollout_sample(letter_a):
    model = fit_dmp(letter_a)
    np.testing.assert_allclose(rollout(model).accelerations[0], initial_acceleration(model), rtol=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-0.2, 0.2).filter(lambda v: abs(v) > 1e-3))
def test_original_goal_scaling_identity(seed, new_goal):
    rng = np.random.default_rng(seed)
    model = _model(ORIG, rng.normal(scale=20, size=10), [0.0], [0.05])
    base = rollout(model).positions[:, 0]
    moved = rollout(model, g=[new_goal]).positions[:, 0]
    predicted = 0.0 + (new_goal - 0.0) / 0.05 * (base - 0.0)
    np.testing.assert_allclose(moved, predicted, rtol=0, atol=1e-9)


def test_euler_is_first_order():
    model = _model(STAR, np.linspace(-5, 5, 10), [0.0], [1.0])
    finals = [rollout(model, dt=dt, duration=1.0).positions[-1, 0] for dt in (0.004, 0.002, 0.001)]
    ratio = abs(finals[0] - finals[1]) / abs(finals[1] - finals[2])
    assert 1.6 < ratio < 2.4


def test_settle_extends_rollout(letter_a):
    model = fit_dmp(letter_a)
    r = rollout(model, settle=0.5)
    assert len(r.positions) == letter_a.sample_count + 75
    assert np.all(r.phase[letter_a.sample_count - 1:] == 0.0)


def test_with_formulation_keeps_weights(letter_a):
    model = fit_dmp(letter_a)
    other = with_formulation(model, Formulation.ORIGINAL)
    np.testing.assert_array_equal(other.weights, model.weights)
    assert other.params.formulation is Formulation.ORIGINAL
