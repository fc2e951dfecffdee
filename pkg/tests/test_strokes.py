import json

import numpy as np
import pytest

from handwriting_dmp import letters
from handwriting_dmp.generator import rollout
from handwriting_dmp.learner import Formulation, TransformParams, fit_dmp
from handwriting_dmp.strokes import SegmentationConfig, compose, estimate_plane, segment
from handwriting_dmp.trajectory import Demonstration


@pytest.fixture(scope="module")
def d3():
    return letters.two_stroke_d()


@pytest.fixture(scope="module")
def d_models(d3):
    return [fit_dmp(s.samples) for s in segment(d3).strokes]


def _flat(n, z=0.02):
    t = np.linspace(0, 1, n)
    return np.column_stack([t, t**2, np.full(n, z)])


def test_plane_of_constant_height():
    demo = Demonstration(0.01, _flat(100), ("x", "y", "z"))
    assert estimate_plane(demo) == (0.02, 0.0)


def test_plane_median_ignores_lift():
    pos = _flat(200)
    pos[90:110, 2] = 0.05
    assert estimate_plane(Demonstration(0.01, pos, ("x", "y", "z")))[0] == 0.02


def test_plane_of_noisy_capture():
    rng = np.random.default_rng(7)
    pos = _flat(1000)
    pos[:, 2] = rng.normal(0.02, 1e-4, 1000)
    mu, sigma = estimate_plane(Demonstration(0.01, pos, ("x", "y", "z")))
    assert abs(mu - 0.02) < 3e-5
    assert 0 < sigma < 1e-3


def test_plane_needs_z():
    with pytest.raises(ValueError, match="no z channel"):
        estimate_plane(letters.letter("a"))


def test_two_stroke_d(d3):
    seg = segment(d3)
    assert len(seg.strokes) == 2
    stem, bowl = seg.strokes
    assert stem.start_index == 0 and stem.end_index < bowl.start_index
    assert stem.samples.dofs == ("x", "y")
    np.testing.assert_array_equal(stem.samples.positions, d3.positions[stem.start_index:stem.end_index, :2])
    assert seg.pen_up_count == d3.sample_count - sum(s.end_index - s.start_index for s in seg.strokes)


def test_continuous_letter_is_one_stroke():
    seg = segment(letters.on_plane(letters.letter("M")))
    assert len(seg.strokes) == 1
    assert seg.strokes[0].end_index == 1000


def test_airborne_capture_has_no_strokes():
    demo = Demonstration(0.01, _flat(100, z=0.2), ("x", "y", "z"))
    seg = segment(demo, SegmentationConfig(mu_z=0.02))
    assert seg.strokes == ()
    assert seg.pen_up_count == 100


def test_fast_descent_inside_band_is_pen_down_but_rise_is_not():
    pos = _flat(100)
    pos[50:, 2] += np.linspace(0, 0.004, 50)  # rises 4 mm in 0.5 s = 8 mm/s
    cfg = SegmentationConfig(theta=0.005, sigma=0.005, mu_z=0.02)
    seg = segment(Demonstration(0.01, pos, ("x", "y", "z")), cfg)
    # the central difference at the kink sees half the slope
    assert [(s.start_index, s.end_index) for s in seg.strokes] == [(0, 51)]


def test_short_runs_are_dropped():
    pos = _flat(60)
    pos[:, 2] = 0.2
    pos[30:32, 2] = 0.02
    seg = segment(Demonstration(0.01, pos, ("x", "y", "z")), SegmentationConfig(mu_z=0.02))
    assert seg.strokes == ()
    assert not seg.pen_down.any()


def test_every_sample_classified_once(d3):
    seg = segment(d3)
    covered = np.zeros(d3.sample_count, dtype=int)
    for s in seg.strokes:
        covered[s.start_index:s.end_index] += 1
    np.testing.assert_array_equal(covered, seg.pen_down.astype(int))
    ends = [(s.start_index, s.end_index) for s in seg.strokes]
    assert ends == sorted(ends)


def test_segmentation_idempotent_on_flattened_strokes(d3):
    first = segment(d3)
    pos = d3.positions.copy()
    pos[first.pen_down, 2] = first.mu_z
    second = segment(Demonstration(d3.dt, pos, d3.dofs), SegmentationConfig(mu_z=first.mu_z))
    assert [(s.start_index, s.end_index) for s in second.strokes] == \
        [(s.start_index, s.end_index) for s in first.strokes]


def test_manifest_schema(d3):
    doc = json.loads(segment(d3).dumps())
    assert set(doc) >= {"strokes", "mu_z", "theta", "sigma"}
    assert doc["strokes"][0] == {"start_index": 0, "end_index": 400}


def test_bad_config():
    with pytest.raises(ValueError):
        SegmentationConfig(theta=0)


def test_identity_composition(d_models):
    letter = compose(d_models)
    for model, r in zip(d_models, letter.strokes):
        np.testing.assert_array_equal(r.positions, rollout(model, settle=1.0).positions)
    assert len(letter.gaps) == 1
    assert letter.gaps[0]["lift"] == letter.strokes[0].positions[-1].tolist()


def test_d_to_p(d_models):
    stem, bowl = d_models
    mid = 0.5 * (stem.y0 + stem.g)
    letter = compose(d_models, {1: {"g": mid}})
    assert np.linalg.norm(letter.strokes[1].positions[-1] - mid) < 1e-3
    np.testing.assert_array_equal(letter.strokes[1].positions[0], bowl.y0)


def test_far_goal_under_goal_robust(d_models):
    bowl = d_models[1]
    far = bowl.y0 + 2.0 * (bowl.g - bowl.y0) + np.array([0.03, 0.0])
    r = compose([bowl], {0: {"g": far}}).strokes[0]
    assert np.all(np.isfinite(r.positions))
    assert np.linalg.norm(r.positions[-1] - far) < 1e-3


def test_original_strokes_are_flagged(letter_a):
    orig = TransformParams(formulation=Formulation.ORIGINAL)
    models = [fit_dmp(letter_a), fit_dmp(letter_a, orig)]
    assert compose(models).flagged == (1,)


def test_compose_override_mismatch(d_models):
    with pytest.raises(ValueError):
        compose(d_models, {0: {"g": [0.0, 0.0, 0.0]}})
