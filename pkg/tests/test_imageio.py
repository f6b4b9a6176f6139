import math

import numpy as np
import pytest

from cfbi.accumulator import BinSpec
from cfbi.detector import DetectorConfig, fbi_detect
from cfbi.errors import FileMissing, MalformedHeader, UnsupportedFormat
from cfbi.imageio import (EdgeImage, disk_outline, draw_circle, edgels, load_edge_image,
                          midpoint_circle, parse_netpbm, rasterize_points, triplet_count,
                          write_pbm, write_pgm)


def test_pbm_center_bit(tmp_path):
    p = tmp_path / "c.pbm"
    p.write_bytes(b"P1\n# a comment\n3 3\n0 0 0\n0 1 0\n0 0 0\n")
    img = load_edge_image(p, "pbm")
    assert img.n_edgels == 1 and img.bitmap[1, 1]
    assert edgels(img).points.tolist() == [[1.5, 1.5]]


def test_white_pgm(tmp_path):
    p = tmp_path / "w.pgm"
    p.write_bytes(b"P5\n4 2\n255\n" + bytes([255] * 8))
    assert load_edge_image(p).n_edgels == 0


def test_pgm_threshold():
    data = b"P2\n3 1\n255\n0 127 128\n"
    assert parse_netpbm(data).bitmap.tolist() == [[True, True, False]]
    assert parse_netpbm(data, threshold=100).bitmap.tolist() == [[True, False, False]]
    # 16-bit maxval scales the threshold
    assert parse_netpbm(b"P2\n2 1\n65535\n32767 40000\n").bitmap.tolist() == [[True, False]]


@pytest.mark.parametrize("binary", [True, False])
@pytest.mark.parametrize("writer", [write_pbm, write_pgm])
def test_write_load_round_trip(tmp_path, writer, binary):
    rng = np.random.default_rng(0)
    img = EdgeImage(rng.random((13, 21)) < 0.2)
    p = tmp_path / ("x.pbm" if writer is write_pbm else "x.pgm")
    writer(img, p, binary=binary)
    back = load_edge_image(p)
    assert np.array_equal(back.bitmap, img.bitmap)
    again = rasterize_points(edgels(back), back.width, back.height)
    assert np.array_equal(again.bitmap, img.bitmap)


def test_errors(tmp_path):
    with pytest.raises(FileMissing):
        load_edge_image(tmp_path / "nope.pbm")
    bad = tmp_path / "bad.pbm"
    for blob, exc in ((b"", MalformedHeader), (b"P1\n3\n", MalformedHeader),
                      (b"P1\n0 3\n", MalformedHeader), (b"P1\n2 2\n0 1\n", MalformedHeader),
                      (b"P4\n16 2\n\x00", MalformedHeader), (b"P6\n1 1\n255\n\x00\x00\x00", UnsupportedFormat),
                      (b"GIF89a", MalformedHeader)):
        bad.write_bytes(blob)
        with pytest.raises(exc):
            load_edge_image(bad)
    good = tmp_path / "g.pgm"
    good.write_bytes(b"P2\n1 1\n255\n0\n")
    with pytest.raises(UnsupportedFormat):
        load_edge_image(good, "pbm")


def test_edgels_order_and_empty():
    img = EdgeImage(np.zeros((4, 5), dtype=bool))
    assert len(edgels(img)) == 0
    bm = np.zeros((3, 3), dtype=bool)
    bm[0, 0] = True
    assert edgels(EdgeImage(bm)).points.tolist() == [[0.5, 0.5]]
    bm[2, 1] = bm[0, 2] = True
    assert edgels(EdgeImage(bm)).points.tolist() == [[0.5, 0.5], [2.5, 0.5], [1.5, 2.5]]
    assert edgels(EdgeImage(bm)).unit == "px"


def test_midpoint_circle_count():
    img = draw_circle(480, 480, 240, 240, 50)
    n = img.n_edgels
    assert 0.8 * 2 * math.pi * 50 <= n <= 1.2 * 2 * math.pi * 50
    for x, y in midpoint_circle(0, 0, 50):
        assert abs(math.hypot(x, y) - 50) <= 0.5 + 1e-9


def test_disk_outline():
    img = disk_outline(480, 480, 240, 240, 188)
    assert img.n_edgels == 1500
    p = edgels(img).points
    d = np.hypot(p[:, 0] - 240, p[:, 1] - 240)
    assert d.max() <= 188 and d.min() > 186


@pytest.mark.parametrize("xc,yc,r", [(240, 240, 100), (150, 300, 57), (200, 210, 180)])
def test_rasterized_circle_recovered(xc, yc, r):
    img = draw_circle(480, 480, xc, yc, r)
    res = fbi_detect(edgels(img), DetectorConfig(bin_spec=BinSpec.for_image(480, 480), rng_seed=0))
    # midpoint pixels are centred on integer coordinates -> true circle at +0.5
    c = res.circle
    assert abs(c.xc - (xc + 0.5)) < 1 and abs(c.yc - (yc + 0.5)) < 1 and abs(c.r - r) < 1


def test_triplet_count():
    assert triplet_count(3) == 1 and triplet_count(2) == 0 and triplet_count(0) == 0
    assert triplet_count(1000) == 166_167_000
    n = 10 ** 6
    assert triplet_count(n) == n * (n - 1) * (n - 2) // 6
    with pytest.raises(ValueError):
        triplet_count(-1)
