"""End-to-end smoke tests for the python module.

Deeper numeric verification lives in the C++ unit and acceptance suites;
these tests check that the bindings round-trip data faithfully and that the
main operations are usable from python.
"""

import math

import numpy as np
import pytest

import wtm


def test_image_roundtrip():
    rng = np.random.default_rng(7)
    pixels = np.floor(rng.uniform(0.0, 256.0, size=(13, 21)))
    img = wtm.GrayImage(pixels)
    assert (img.height, img.width) == (13, 21)
    back = img.to_array()
    assert back.shape == (13, 21)
    np.testing.assert_array_equal(back, pixels)


def test_uniform_weights_reduce_to_plain_ncc():
    rng = np.random.default_rng(11)
    x = rng.uniform(0.0, 255.0, size=(6, 9))
    y = rng.uniform(0.0, 255.0, size=(6, 9))
    ones = wtm.uniform_map(9, 6)
    assert wtm.weighted_ncc(x, y, ones) == pytest.approx(wtm.ncc(x, y), abs=1e-12)
    assert wtm.weighted_ncc(x, x, ones) == pytest.approx(1.0, abs=1e-12)


def test_generated_maps_match_their_formulas():
    m = wtm.gaussian_map(44, 22).to_array()
    assert m.shape == (22, 44)
    # Corners clamp to the floor of 1; the center carries the bump.
    assert m[0, 0] == 1.0 and m[-1, -1] == 1.0
    cx, cy = (44 - 1) / 2.0, (22 - 1) / 2.0
    expected = max(1.0, 5.0 * math.exp(-((22 - cx) ** 2 / (2 * 16.0**2) + (11 - cy) ** 2 / (2 * 8.0**2))))
    assert m[11, 22] == pytest.approx(expected, abs=1e-12)


def test_planted_patch_is_recovered_exactly():
    image, annotation = wtm.generate_scene(seed=5, noise_sigma=0.0)
    truth = annotation.right_eye
    tpl = wtm.extract_template(image, truth, 32, 16, "right", id=0)
    weights = wtm.map_for_template(tpl, "gauss-ellipse")
    for search in (wtm.match_template, wtm.fast_match):
        result = search(image, tpl, weights)
        assert result["score"] == pytest.approx(1.0, abs=1e-9)
        assert wtm.detection_error(result["center"], truth) == 0.0
    grid = wtm.score_map(image, tpl, weights)
    scores = grid["scores"]
    ox, oy = grid["origin"]
    best = np.unravel_index(np.nanargmax(scores), scores.shape)
    assert (ox + best[1], oy + best[0]) == (truth[0] - tpl.anchor[0], truth[1] - tpl.anchor[1])


def test_scene_generation_is_deterministic():
    a, ann_a = wtm.generate_scene(seed=42, noise_sigma=12.75, distractor_count=2)
    b, ann_b = wtm.generate_scene(seed=42, noise_sigma=12.75, distractor_count=2)
    c, _ = wtm.generate_scene(seed=43, noise_sigma=12.75, distractor_count=2)
    np.testing.assert_array_equal(a.to_array(), b.to_array())
    assert ann_a.right_eye == ann_b.right_eye and ann_a.left_eye == ann_b.left_eye
    assert not np.array_equal(a.to_array(), c.to_array())


def test_experiment_on_clean_corpus_is_perfect():
    corpus = wtm.generate_corpus(3, base_seed=100, template_w=24, template_h=12)
    out = wtm.run_experiment(
        corpus["images"],
        corpus["annotations"],
        corpus["templates"],
        counts=[1, 3],
        threshold_px=8.0,
        kinds=["uniform", "gauss-circle"],
        threads=1,
    )
    assert all(rate == 1.0 for rate in out["rates"].values())
    assert all(delta == 0.0 for delta in out["deltas"].values())
    assert "Right eye" in out["text"] and "[gauss-circle vs uniform]" in out["text"]
    assert out["csv"].startswith("eye,kind,count,rate,delta\n")
    assert ("right", "gauss-circle", 3) in out["rates"]


def test_pgm_bytes_roundtrip():
    image, _ = wtm.generate_scene(seed=9, noise_sigma=20.0)
    data = wtm.write_pgm(image)
    assert data.startswith(b"P5\n96 72\n255\n")
    again = wtm.read_pgm(data)
    np.testing.assert_array_equal(again.to_array(), image.to_array())
    with pytest.raises(wtm.ParseError):
        wtm.read_pgm(data + b"x")


def test_ensemble_prefers_lower_id_on_ties():
    image, annotation = wtm.generate_scene(seed=3)
    tpl_a = wtm.extract_template(image, annotation.left_eye, 24, 12, "left", id=4)
    tpl_b = wtm.extract_template(image, annotation.left_eye, 24, 12, "left", id=9)
    maps = [wtm.map_for_template(tpl_a, "uniform")] * 2
    best = wtm.match_ensemble(image, [tpl_a, tpl_b], maps)
    assert best["template_id"] == 4
    assert best["score"] == pytest.approx(1.0, abs=1e-12)


def test_degenerate_inputs_raise_typed_errors():
    flat = wtm.GrayImage(np.full((10, 12), 50.0))
    tpl = wtm.Template(wtm.GrayImage(np.arange(12.0).reshape(3, 4)), (1.5, 1.0), "right")
    with pytest.raises(wtm.NoValidWindowError):
        wtm.fast_match(flat, tpl, wtm.uniform_map(4, 3))
    with pytest.raises(wtm.DegenerateWindowError):
        wtm.ncc(np.full(9, 4.0).reshape(3, 3), np.arange(9.0).reshape(3, 3))
