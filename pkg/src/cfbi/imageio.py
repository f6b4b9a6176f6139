"""Binary edge images (Netpbm PBM/PGM) and edgel extraction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .detector import PointSet
from .errors import FileMissing, MalformedHeader, UnsupportedFormat

PGM_THRESHOLD = 128
_WS = b" \t\r\n\v\f"


@dataclass
class EdgeImage:
    """Row-major boolean bitmap, ``True`` marking an edgel; shape ``(height, width)``."""

    bitmap: np.ndarray

    def __post_init__(self):
        self.bitmap = np.asarray(self.bitmap, dtype=bool)
        if self.bitmap.ndim != 2 or 0 in self.bitmap.shape:
            raise ValueError("bitmap must be a non-empty 2-D array")

    @property
    def width(self) -> int:
        return self.bitmap.shape[1]

    @property
    def height(self) -> int:
        return self.bitmap.shape[0]

    @property
    def n_edgels(self) -> int:
        return int(np.count_nonzero(self.bitmap))


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def token(self) -> bytes:
        d = self.data
        while self.pos < len(d):
            c = d[self.pos:self.pos + 1]
            if c == b"#":
                while self.pos < len(d) and d[self.pos:self.pos + 1] not in (b"\n", b"\r"):
                    self.pos += 1
            elif c in _WS:
                self.pos += 1
            else:
                break
        start = self.pos
        while self.pos < len(d) and d[self.pos:self.pos + 1] not in _WS + b"#":
            self.pos += 1
        if start == self.pos:
            raise MalformedHeader("unexpected end of header")
        return d[start:self.pos]

    def integer(self, what: str) -> int:
        tok = self.token()
        try:
            v = int(tok)
        except ValueError:
            raise MalformedHeader(f"bad {what}: {tok!r}") from None
        if v < 1:
            raise MalformedHeader(f"{what} must be positive, got {v}")
        return v


def parse_netpbm(data: bytes, threshold: int = PGM_THRESHOLD) -> EdgeImage:
    """Decode P1/P2/P4/P5 bytes into an :class:`EdgeImage`.

    PBM bit 1 (black) is an edgel; PGM pixels darker than ``threshold`` (on a
    0-255 scale) are edgels.
    """
    rd = _Reader(data)
    try:
        magic = rd.token()
    except MalformedHeader:
        raise MalformedHeader("empty file") from None
    if magic not in (b"P1", b"P2", b"P4", b"P5"):
        if len(magic) == 2 and magic[:1] == b"P":
            raise UnsupportedFormat(f"Netpbm variant {magic.decode(errors='replace')} not supported")
        raise MalformedHeader(f"not a Netpbm file (magic {magic[:8]!r})")
    w = rd.integer("width")
    h = rd.integer("height")
    maxval = 1
    if magic in (b"P2", b"P5"):
        maxval = rd.integer("maxval")
        if maxval > 65535:
            raise MalformedHeader(f"maxval {maxval} out of range")

    if magic == b"P1":
        body = np.frombuffer(data[rd.pos:], dtype=np.uint8)
        bits = body[(body == ord("0")) | (body == ord("1"))]
        if len(bits) < w * h:
            raise MalformedHeader("raster shorter than header declares")
        return EdgeImage((bits[:w * h] == ord("1")).reshape(h, w))
    if magic == b"P4":
        start = rd.pos + 1
        stride = (w + 7) // 8
        raw = np.frombuffer(data[start:start + stride * h], dtype=np.uint8)
        if len(raw) < stride * h:
            raise MalformedHeader("raster shorter than header declares")
        bits = np.unpackbits(raw.reshape(h, stride), axis=1)[:, :w]
        return EdgeImage(bits.astype(bool))
    if magic == b"P2":
        try:
            vals = np.array(data[rd.pos:].split(), dtype=np.int64)
        except ValueError:
            raise MalformedHeader("non-numeric PGM raster") from None
        if len(vals) < w * h:
            raise MalformedHeader("raster shorter than header declares")
        vals = vals[:w * h].reshape(h, w)
    else:
        start = rd.pos + 1
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
        raw = np.frombuffer(data[start:start + w * h * dtype.itemsize], dtype=dtype)
        if len(raw) < w * h:
            raise MalformedHeader("raster shorter than header declares")
        vals = raw.reshape(h, w).astype(np.int64)
    return EdgeImage(vals * 255 < threshold * maxval)


def load_edge_image(path, format: str | None = None, threshold: int = PGM_THRESHOLD) -> EdgeImage:
    """Load a PBM or PGM edge image from ``path``.

    ``format`` ("pbm" or "pgm") is only checked against the file's magic
    number; the file header always decides how it is decoded.
    """
    path = Path(path)
    if not path.is_file():
        raise FileMissing(f"no such file: {path}")
    if format not in (None, "pbm", "pgm"):
        raise UnsupportedFormat(f"unsupported format {format!r}")
    data = path.read_bytes()
    if format is not None:
        expect = (b"P1", b"P4") if format == "pbm" else (b"P2", b"P5")
        if data[:2] not in expect:
            raise UnsupportedFormat(f"{path} is not a {format.upper()} file")
    return parse_netpbm(data, threshold)


def write_pbm(img: EdgeImage, path, binary: bool = True) -> None:
    h, w = img.bitmap.shape
    with open(path, "wb") as fh:
        if binary:
            fh.write(f"P4\n{w} {h}\n".encode())
            fh.write(np.packbits(img.bitmap.astype(np.uint8), axis=1).tobytes())
        else:
            fh.write(f"P1\n{w} {h}\n".encode())
            for row in img.bitmap.astype(np.uint8):
                fh.write((" ".join(map(str, row)) + "\n").encode())


def write_pgm(img: EdgeImage, path, binary: bool = True) -> None:
    """Edgels black (0), background white (255)."""
    h, w = img.bitmap.shape
    vals = np.where(img.bitmap, 0, 255).astype(np.uint8)
    with open(path, "wb") as fh:
        if binary:
            fh.write(f"P5\n{w} {h}\n255\n".encode())
            fh.write(vals.tobytes())
        else:
            fh.write(f"P2\n{w} {h}\n255\n".encode())
            for row in vals:
                fh.write((" ".join(map(str, row)) + "\n").encode())


def edgels(img: EdgeImage) -> PointSet:
    """Pixel-center coordinates ``(ix + 0.5, iy + 0.5)`` of every edgel, row-major."""
    iy, ix = np.nonzero(img.bitmap)
    return PointSet(np.column_stack([ix + 0.5, iy + 0.5]).astype(np.float64), unit="px")


def rasterize_points(pts, width: int, height: int) -> EdgeImage:
    """Inverse of :func:`edgels`: mark the pixel containing each point."""
    p = np.asarray(pts.points if isinstance(pts, PointSet) else pts, dtype=np.float64)
    bm = np.zeros((height, width), dtype=bool)
    ix = np.floor(p[:, 0]).astype(np.int64)
    iy = np.floor(p[:, 1]).astype(np.int64)
    ok = (ix >= 0) & (ix < width) & (iy >= 0) & (iy < height)
    bm[iy[ok], ix[ok]] = True
    return EdgeImage(bm)


def midpoint_circle(xc: int, yc: int, r: int):
    """Integer pixels of a circle outline (midpoint algorithm, 8-way symmetry)."""
    pts = set()
    x, y = r, 0
    err = 1 - r
    while x >= y:
        for dx, dy in ((x, y), (y, x), (-y, x), (-x, y), (-x, -y), (-y, -x), (y, -x), (x, -y)):
            pts.add((xc + dx, yc + dy))
        y += 1
        if err < 0:
            err += 2 * y + 1
        else:
            x -= 1
            err += 2 * (y - x) + 1
    return sorted(pts)


def draw_circle(width: int, height: int, xc: int, yc: int, r: int) -> EdgeImage:
    """Blank image with one midpoint-rasterized circle outline."""
    bm = np.zeros((height, width), dtype=bool)
    for x, y in midpoint_circle(xc, yc, r):
        if 0 <= x < width and 0 <= y < height:
            bm[y, x] = True
    return EdgeImage(bm)


def disk_outline(width: int, height: int, xc: float, yc: float, r: float) -> EdgeImage:
    """Edge image of a filled disk: disk pixels with at least one 8-neighbour outside.

    A pixel is inside when its center is within ``r`` of ``(xc, yc)``. The
    outline is 4-connected and about 8 r pixels long, close to what an edge
    detector returns for a solid blob.
    """
    yy, xx = np.mgrid[0:height, 0:width]
    disk = (xx + 0.5 - xc) ** 2 + (yy + 0.5 - yc) ** 2 <= r * r
    pad = np.pad(disk, 1)
    inner = disk.copy()
    for dy in (0, 1, 2):
        for dx in (0, 1, 2):
            inner &= pad[dy:dy + height, dx:dx + width]
    return EdgeImage(disk & ~inner)


def triplet_count(n: int) -> int:
    """Number of unordered triplets among ``n`` edgels, exact."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return math.comb(n, 3)
