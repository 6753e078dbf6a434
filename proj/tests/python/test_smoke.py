"""Smoke tests for the python bindings: every exported operation runs end to
end on small arrays and agrees with hand-computed values."""

import numpy as np
import pytest

import shotkit


def planted_video(n=12, q=2, d=2, cut=6, jump=5.0):
    """Two constant blocks with one feature jump at `cut`."""
    visual = np.zeros((n, q, d), dtype=np.float32)
    visual[cut:] = jump / np.sqrt(q * d)
    return visual


def test_tensor_roundtrip(tmp_path):
    array = np.random.default_rng(3).normal(size=(4, 3, 2)).astype(np.float32)
    path = str(tmp_path / "t.stcf")
    shotkit.write_tensor(array, path)
    back = shotkit.read_tensor(path)
    assert back.shape == (4, 3, 2)
    assert back.dtype == np.float32
    np.testing.assert_array_equal(back, array)


def test_frame_deltas_hand_case():
    visual = planted_video(n=4, cut=2, jump=6.0)
    deltas = shotkit.frame_deltas(visual)
    np.testing.assert_allclose(deltas, [0.0, 0.0, 6.0, 0.0], atol=1e-6)


def test_gaussian_smooth_identity_and_mass():
    signal = np.array([0.0, 1.0, 0.0, 0.0, 2.0])
    np.testing.assert_array_equal(shotkit.gaussian_smooth(signal, 0.0), signal)
    smoothed = shotkit.gaussian_smooth(signal, 1.0)
    assert smoothed.shape == signal.shape
    assert smoothed.max() < signal.max()


def test_detect_shots_finds_planted_cut():
    spans = shotkit.detect_shots(planted_video(), k_sigma=0.5)
    assert spans == [(0, 5), (6, 11)]


def test_select_keyframes_prefers_the_cut():
    # Single shot: pure top-1 by motion.
    frames = shotkit.select_keyframes(planted_video(), k=1, smooth_sigma=0.0, boundaries=[])
    assert frames == [6]
    # Detected shots: the quiet first shot gets an anchor alongside the top-1.
    anchored = shotkit.select_keyframes(planted_video(), k=1, smooth_sigma=0.0)
    assert anchored == [0, 6]
    quota = shotkit.select_keyframes(
        planted_video(), k=2, smooth_sigma=0.0, boundaries=[6], scope="per-shot"
    )
    assert len(quota) == 2


def test_plan_variance_ranks_positions():
    visual = np.zeros((4, 2, 1), dtype=np.float32)
    visual[:, 1, 0] = [0.0, 3.0, 6.0, 9.0]  # position 1 varies, position 0 is flat
    plan = shotkit.plan_variance(visual, boundaries=[], rho=0.5)
    assert len(plan) == 1
    assert plan[0]["shot"] == (0, 3)
    assert plan[0]["retained"] == [1]
    np.testing.assert_allclose(plan[0]["variance"], [0.0, 11.25], atol=1e-9)


def test_compress_reference_budget():
    visual = np.random.default_rng(7).normal(size=(80, 32, 8)).astype(np.float32)
    out = shotkit.compress(visual, k=32, rho=0.25, boundaries=[])
    assert out["retained"] == 1408
    assert out["uncompressed"] == 2560
    assert out["ratio"] == pytest.approx(0.55)
    assert out["tokens"].shape == (1408, 8)
    assert out["mask"].shape == (80, 32)
    assert int(out["mask"].sum()) == 1408
    assert len(out["provenance"]) == 1408
    assert len(out["keyframes"]) == 32


def test_pool_audio_means():
    audio = np.arange(1, 7, dtype=np.float32).reshape(6, 1)
    pooled = shotkit.pool_audio(audio, budget=3)
    np.testing.assert_allclose(pooled, [[1.5], [3.5], [5.5]], atol=1e-6)


def test_build_sequence_text_protocol():
    text = shotkit.build_sequence(
        planted_video(),
        duration_s=12.0,
        query="where is the jump",
        k=2,
        rho=0.5,
        audio=np.ones((5, 2), dtype=np.float32),
        l_budget=4,
    )
    lines = text.strip().split("\n")
    assert lines[0].startswith("TIME ")
    assert "SEP V_E" in lines
    assert "SEP A_E" in lines
    assert lines[-2] == "QUERY where is the jump"
    assert lines[-1].startswith("PROMPT ")
    assert sum(1 for l in lines if l.startswith("AUD ")) == 4


def test_parse_moments_repairs():
    moments, repairs = shotkit.parse_moments("[[52, 88], [90, 98]]", 100.0)
    assert moments == [(52.0, 88.0), (90.0, 98.0)]
    assert repairs == []

    moments, repairs = shotkit.parse_moments("[[5, 10], [12, 20", 30.0)
    assert moments == [(5.0, 10.0), (12.0, 20.0)]
    assert repairs == ["append-brackets"]


def test_evaluate_echo_scores_one():
    gt = [(10.0, 20.0), (30.0, 40.0)]
    report = shotkit.evaluate([(gt, gt), ([(5.0, 9.0)], [(5.0, 9.0)])])
    assert report["R1@0.5"] == pytest.approx(1.0)
    assert report["R1@0.7"] == pytest.approx(1.0)
    assert report["mAP@0.5"] == pytest.approx(1.0)
    assert report["mIoU"] == pytest.approx(1.0)
    assert report["n_queries"] == 2


def test_temporal_iou():
    assert shotkit.temporal_iou((0.0, 10.0), (0.0, 10.0)) == pytest.approx(1.0)
    assert shotkit.temporal_iou((5.0, 15.0), (10.0, 20.0)) == pytest.approx(1.0 / 3.0)


def test_errors_surface_as_value_error():
    with pytest.raises(ValueError):
        shotkit.compress(planted_video(), k=0)
    with pytest.raises(ValueError):
        shotkit.parse_moments("no moments here", 10.0)
