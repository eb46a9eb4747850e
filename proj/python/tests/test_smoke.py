import json
import math

import numpy as np
import pytest

import pedmotion as pm


def test_axis_angle_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(100):
        axis = rng.normal(size=3)
        aa = axis / np.linalg.norm(axis) * rng.uniform(0.01, 3.1)
        r = pm.axis_angle_to_matrix(aa)
        assert r.shape == (3, 3)
        np.testing.assert_allclose(r @ r.T, np.eye(3), atol=1e-12)
        np.testing.assert_allclose(pm.matrix_to_axis_angle(r), aa, atol=1e-9)


def test_sixd_and_euler():
    r = pm.sixd_to_matrix([2.0, 0.0, 0.0], [1.0, 3.0, 0.0])
    np.testing.assert_allclose(r, np.eye(3), atol=1e-15)
    angles, locked = pm.matrix_to_euler_xyz(pm.euler_xyz_to_matrix([0.1, -0.2, 0.3]))
    assert not locked
    np.testing.assert_allclose(angles, [0.1, -0.2, 0.3], atol=1e-12)
    _, locked = pm.matrix_to_euler_xyz(pm.euler_xyz_to_matrix([0.0, math.pi / 2, 0.0]))
    assert locked


def test_degenerate_sixd_raises_input_error():
    with pytest.raises(pm.InputError):
        pm.sixd_to_matrix([1.0, 0.0, 0.0], [2.0, 0.0, 0.0])
    assert issubclass(pm.InputError, ValueError)


def test_injury_probability():
    assert pm.p_mais3(0.0) == pytest.approx(1.0 / (1.0 + math.exp(3.164)), abs=1e-12)
    assert pm.p_mais3(3.164 / 0.288) == pytest.approx(0.5, abs=1e-12)


def test_motion_pipeline():
    corpus = pm.synth_corpus(6, seed=3)
    assert len(corpus) == 6
    assert pm.synth_corpus(6, seed=3) == corpus
    for text in corpus:
        assert pm.document_format(text) == "pedmotion.motion"
        assert pm.canonicalize(text) == text
        frames = len(json.loads(text)["frames"])
        positions = pm.reconstruct(text)
        assert positions.shape == (frames, 3)
        np.testing.assert_array_equal(positions[0], [0.0, 0.0, 0.0])
        assert pm.classify(text) in {"not_crossing", "attempting", "crossing"}
        clip = pm.retarget(text)
        assert pm.document_format(clip) == "pedmotion.clip"
        assert pm.canonicalize(clip) == clip


def test_malformed_motion_raises():
    with pytest.raises(pm.InputError, match="fps"):
        pm.reconstruct('{"format": "pedmotion.motion", "version": 1, "id": "x", "frames": []}')


def test_filter_and_tags():
    assert pm.stem("walking") == "walk"
    keep = pm.keyword_filter(["a person walks across the street", "a person juggles"])
    assert keep == [True, False]
    assert pm.keyword_filter(["juggles"], keywords=["juggle"]) == [True]
    assert pm.tag_behavior("someone is running fast")[0] == "running"


def test_generate_simulate_evaluate():
    clips = [pm.retarget(m) for m in pm.synth_corpus(12, seed=5)]
    scenarios = pm.generate(clips, seed=9, scenarios=1)
    assert len(scenarios) == 1
    log = pm.simulate(scenarios[0], clips, planner="reactive_brake")
    assert log == pm.simulate(scenarios[0], clips, planner="reactive_brake")
    assert pm.document_format(log) == "pedmotion.log"
    report = json.loads(pm.evaluate([log], scenarios))
    assert report["format"] == "pedmotion.report"
