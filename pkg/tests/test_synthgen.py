import json
import math

import numpy as np
import pytest

from cfbi.errors import SeparationInfeasible
from cfbi.geometry import Circle
from cfbi.synthgen import (B1Spec, B2Spec, gen_b1, gen_b2, quantize, read_points_csv,
                           resolution_label, round_half_away, write_csv)

# noise level that reproduces the survivor-count table (the table does not state one)
TABLE_NOISE_PCT = 4.0


def radial(ds, pts=None):
    t = ds.truth
    p = ds.points if pts is None else pts
    return np.hypot(p[:, 0] - t.xc, p[:, 1] - t.yc) - t.r


class TestB1:
    def test_noise_free_on_semicircle(self):
        ds = gen_b1(B1Spec(sigma=0.0, seed=3))
        assert np.allclose(radial(ds), 0, atol=1e-12)
        assert np.all(ds.points[:, 1] >= 60 - 1e-9)
        assert ds.n_inliers == 50

    def test_outlier_counts_and_magnitudes(self):
        for seed in range(20):
            ds = gen_b1(B1Spec(n_outliers=5, seed=seed))
            assert (ds.n_inliers, ds.n_outliers) == (45, 5)
            d = np.abs(radial(ds)[~ds.inlier])
            assert np.all((d >= 5.0) & (d <= 10.0))
            # outliers keep their angle in the upper half plane
            assert np.all(ds.points[:, 1] >= 60 - 1e-9)

    def test_inlier_residual_mean(self):
        ds = gen_b1(B1Spec(n_points=10_000, seed=1))
        assert abs(radial(ds).mean()) < 3 * 1.0 / math.sqrt(10_000)
        assert radial(ds).std() == pytest.approx(1.0, rel=0.05)

    def test_deterministic_and_distinct(self):
        a = gen_b1(B1Spec(n_outliers=2, seed=9))
        b = gen_b1(B1Spec(n_outliers=2, seed=9))
        assert np.array_equal(a.points, b.points) and np.array_equal(a.inlier, b.inlier)
        firsts = [gen_b1(B1Spec(seed=s)).points for s in range(10)]
        for i in range(10):
            for j in range(i):
                assert not np.array_equal(firsts[i], firsts[j])


class TestB2:
    def test_clean(self):
        ds = gen_b2(B2Spec(seed=0))
        assert len(ds.points) == 100
        assert np.allclose(radial(ds), 0, atol=1e-9)

    def test_sigma_levels(self):
        assert [B2Spec(noise_pct=p).sigma for p in (0, 1, 2, 5, 10)] == \
            pytest.approx([0, 1.2, 2.4, 6.0, 12.0])

    @pytest.mark.parametrize("noise", [0, 1, 2, 5, 10])
    def test_contamination(self, noise):
        for seed in range(10):
            spec = B2Spec(noise_pct=noise, outlier_pct=30, seed=seed)
            ds = gen_b2(spec)
            assert (ds.n_inliers, ds.n_outliers) == (70, 30)
            out = ds.points[~ds.inlier]
            assert np.all(np.abs(out - 120) <= 240)
            assert np.all(np.abs(radial(ds, out)) > spec.separation)
            assert spec.separation == max(3 * spec.sigma, 1.2)

    def test_separation_infeasible(self, monkeypatch):
        import cfbi.synthgen as sg
        monkeypatch.setattr(sg, "MAX_OUTLIER_ATTEMPTS", 5)
        # a separation wider than the whole square leaves nowhere to put outliers
        with pytest.raises(SeparationInfeasible):
            gen_b2(B2Spec(noise_pct=200, outlier_pct=10, seed=0))

    def test_deterministic_and_distinct(self):
        a = gen_b2(B2Spec(noise_pct=2, outlier_pct=20, q=3, seed=5))
        b = gen_b2(B2Spec(noise_pct=2, outlier_pct=20, q=3, seed=5))
        assert np.array_equal(a.points, b.points)
        firsts = [gen_b2(B2Spec(outlier_pct=10, seed=s)).points for s in range(10)]
        for i in range(10):
            for j in range(i):
                assert not np.array_equal(firsts[i], firsts[j])


class TestQuantize:
    def test_round_half_away(self):
        assert round_half_away([0.5, 1.5, 2.5, -0.5, -1.5, 0.49]).tolist() == [1, 2, 3, -1, -2, 0]

    def test_identity_on_integers(self):
        pts = np.array([[3.0, 4.0], [1.0, 2.0], [3.0, 4.0]])
        q, lab, eff = quantize(pts, Circle(1, 1, 1), 1, [True, False, False])
        assert q.tolist() == [[1.0, 2.0], [3.0, 4.0]]
        assert lab.tolist() == [False, True]

    def test_effective_truth(self):
        assert quantize(np.zeros((1, 2)), Circle(120, 120, 120), 3)[2] == Circle(40, 40, 40)
        ds = gen_b2(B2Spec(q=12, seed=0))
        assert tuple(ds.effective_truth) == (10.0, 10.0, 10.0)

    def test_grid_and_distinct(self):
        ds = gen_b2(B2Spec(noise_pct=5, outlier_pct=40, q=6, seed=2))
        assert np.array_equal(ds.points, np.round(ds.points))
        assert len(np.unique(ds.points, axis=0)) == len(ds.points)
        assert ds.survivors[0] <= 60 and ds.survivors[1] <= 40

    def test_merged_label_is_any_inlier(self):
        pts = np.array([[0.1, 0.1], [0.2, -0.2], [5.0, 5.0]])
        _, lab, _ = quantize(pts, Circle(0, 0, 1), 1, [False, True, False])
        assert lab.tolist() == [True, False]

    def test_survivors_160(self):
        # averaged over 100 seeds at the table's noise level
        got = np.mean([gen_b2(B2Spec(noise_pct=TABLE_NOISE_PCT, q=3, seed=s)).survivors[0]
                       for s in range(100)])
        assert got == pytest.approx(96.8, abs=1.5)

    def test_survivors_12_at_30pct(self):
        s = np.array([gen_b2(B2Spec(noise_pct=TABLE_NOISE_PCT, outlier_pct=30, q=40,
                                    seed=k)).survivors for k in range(100)])
        assert s[:, 0].mean() == pytest.approx(21.6, abs=1.5)
        assert s[:, 1].mean() == pytest.approx(27.4, abs=1.5)


def test_resolution_labels():
    assert [resolution_label(q) for q in (0, 1, 2, 3, 6, 12, 24, 40)] == \
        ["inf", "480x480", "240x240", "160x160", "80x80", "40x40", "20x20", "12x12"]


def test_csv_round_trip(tmp_path):
    ds = gen_b2(B2Spec(noise_pct=1, outlier_pct=20, q=2, seed=4))
    side = write_csv(ds, tmp_path / "d.csv")
    assert (tmp_path / "d.csv").read_text().splitlines()[0] == "x,y,label"
    pts, inl = read_points_csv(tmp_path / "d.csv")
    assert np.array_equal(pts, ds.points) and np.array_equal(inl, ds.inlier)
    meta = json.loads(side.read_text())
    assert meta["truth"] == [120.0, 120.0, 120.0]
    assert meta["effective_truth"] == [60.0, 60.0, 60.0]
    assert meta["seed"] == 4 and meta["q"] == 2
