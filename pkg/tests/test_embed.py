import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import model, scene
from gestsem.embed import EmbedOptions, brute_force_embed, embed, model_skeleton, skeleton
from gestsem.errors import EmptyTrajectory, InvalidArgument
from gestsem.geometry import Path3, RotationAxis, Vec3
from gestsem.iconic import Connector, Transform, allowed_rotation_axes, posture_model, realize, transform
from conftest import annotation
from strategies import random_model, target_for


def axis_target(name, ref="house", label=None):
    s = scene(name)
    e = s.entity(ref)
    p = dict(e.axes)[label] if label else e.main_axis
    return s.to_speaker(p)


def event_target(name, ev="e1"):
    s = scene(name)
    return s.to_speaker(s.get(ev).place_path)


FIXTURES = [
    ("u_shape", {}, lambda: axis_target("u_house"), True),
    ("u_shape", {}, lambda: axis_target("flat_roof"), False),
    ("car", {"perspectival": True}, lambda: event_target("car_right"), True),
    ("car", {"perspectival": True}, lambda: event_target("car_left"), False),
    ("throw", {"mode": "acting"}, lambda: event_target("throw_fist"), True),
    ("pointed_roof", {}, lambda: axis_target("flat_roof", label="roof"), False),
    ("wheel", {}, lambda: realize(model("wheel")).rotated(RotationAxis.X, 0.7).scaled(3), True),
]


@pytest.mark.parametrize("name,kw,target,expected", FIXTURES)
def test_fixture_verdicts_agree_with_oracle(name, kw, target, expected):
    m = model(name, **kw)
    t = target()
    got = embed(m, t)
    assert got.success is expected
    assert brute_force_embed(m, t).success is expected
    if got.success:
        assert max(got.diagnostics.angle_residuals) <= EmbedOptions().angle_tolerance
        assert got.witness is not None


def test_flat_roof_failure_reports_stroke_count():
    res = embed(model("u_shape"), axis_target("flat_roof"))
    assert res.diagnostics.reason == "stroke count 3 vs 1"


def test_perspectival_witness_has_zero_rotation():
    res = embed(model("car", perspectival=True), event_target("car_right"))
    assert res.witness.theta == 0.0


def test_u_house_needs_rotation():
    res = embed(model("u_shape"), axis_target("u_house"))
    assert res.witness.axis is RotationAxis.Z and res.witness.theta != 0.0
    # the witness actually carries model strokes onto target strokes
    ms = model_skeleton(model("u_shape")).strokes
    ts = skeleton(axis_target("u_house")).strokes
    from gestsem.geometry import angle_between, rotate
    for a, b in zip(ms, ts):
        assert angle_between(rotate(a.direction, RotationAxis.Z, res.witness.theta), b.direction) < 1e-9


def test_reversed_path_without_rotation_fails():
    m = model("car", perspectival=True)
    t = realize(m).reversed()
    assert not brute_force_embed(m, t).success
    assert not embed(m, t).success


def test_empty_trajectory():
    with pytest.raises(EmptyTrajectory):
        embed(posture_model(annotation("hold")), axis_target("u_house"))


def test_options_validation():
    with pytest.raises(InvalidArgument):
        EmbedOptions(scale_bounds=(2, 1))
    with pytest.raises(InvalidArgument):
        EmbedOptions(angle_tolerance=math.pi / 2)


def test_scale_bounds_enforced():
    m = model("roof")
    t = Path3.polyline([(0, 0, 0), (5000, 0, 0)])
    assert not embed(m, t).success
    assert not brute_force_embed(m, t).success
    assert embed(m, t, EmbedOptions(scale_bounds=(1, 10000))).success


def test_skeleton_sampled_quarter_arcs():
    sk = model_skeleton(model("wheel"))
    assert sk.joints == (Connector.ROUND,) * 3
    assert len(sk.strokes) == 4


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.floats(-math.pi, math.pi), st.floats(0.05, 20))
def test_self_embedding(seed, theta, k):
    m = random_model(random.Random(seed))
    axes = sorted(allowed_rotation_axes(m), key=lambda a: a.value)
    t = Transform(k, axes[0], theta) if axes else Transform(k)
    assert embed(transform(m, t), realize(m)).success


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.floats(0.1, 10))
def test_target_scale_invariance(seed, c):
    rng = random.Random(seed)
    m = random_model(rng)
    t = target_for(m, rng, positive=rng.random() < 0.5)
    assert embed(m, t).success == embed(m, t.scaled(c)).success


def test_embed_agrees_with_brute_force_on_random_cases():
    rng = random.Random(20240611)
    agree = 0
    for _ in range(100):
        m = random_model(rng)
        t = target_for(m, rng, positive=rng.random() < 0.5)
        agree += embed(m, t).success == brute_force_embed(m, t).success
    assert agree == 100
