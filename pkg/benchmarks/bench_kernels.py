"""Compare the compiled and numpy kernel backends.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Times the three hot kernels in isolation and the detectors end to end on the
same inputs with each backend, and checks that both produce identical results.
"""

import argparse
import statistics
import time

import numpy as np

from cfbi import _kernels_py, kernels
from cfbi.accumulator import BinSpec
from cfbi.detector import DetectorConfig, fbi_detect, rcd_detect, rht_detect, sample_triplets
from cfbi.geometry import COLLINEARITY_EPS
from cfbi.imageio import disk_outline, edgels
from cfbi.synthgen import B2Spec, gen_b2


def timeit(fn, repeat):
    fn()
    ts = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return statistics.median(ts) * 1e3


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=15)
    args = ap.parse_args()
    if not kernels.compiled_available():
        raise SystemExit("compiled kernels not built; run `pip install -e . --no-build-isolation`")
    from cfbi import _kernels

    img_pts = edgels(disk_outline(480, 480, 240, 240, 188)).points
    spec = BinSpec.for_image(480, 480)
    shape = np.array(spec.shape, dtype=np.int64)
    i, j, k = sample_triplets(np.random.default_rng(0), len(img_pts), 5000)
    rng = np.random.default_rng(1)
    xc, yc = rng.normal(240, 3, (2, 5000))
    r = rng.normal(188, 3, 5000)

    cases = {
        "triplet_votes (5000 triplets)": lambda m: m.triplet_votes(
            img_pts, i, j, k, spec.lo, spec.hi, 1.0, shape, COLLINEARITY_EPS),
        "merge_candidates (5000 circles)": lambda m: m.merge_candidates(xc, yc, r, 1.0),
        "count_inliers (1500 pts x 5000)": lambda m: m.count_inliers(img_pts, xc, yc, r, 1.0),
    }
    print(f"{'kernel':36s} {'numpy ms':>10s} {'cython ms':>10s} {'speedup':>8s}  identical")
    for name, fn in cases.items():
        a, b = fn(_kernels_py), fn(_kernels)
        same = all(np.array_equal(u, v, equal_nan=True) for u, v in zip(a, b))
        tp = timeit(lambda: fn(_kernels_py), args.repeat)
        tc = timeit(lambda: fn(_kernels), args.repeat)
        print(f"{name:36s} {tp:10.2f} {tc:10.2f} {tp / tc:7.1f}x  {same}")

    b2 = gen_b2(B2Spec(noise_pct=0.5, outlier_pct=20, seed=0)).points
    detectors = {
        "fbi, 1500-edgel image": lambda: fbi_detect(img_pts, DetectorConfig(bin_spec=spec)).circle,
        "fbi, B2 100 points": lambda: fbi_detect(b2, DetectorConfig()).circle,
        "rht, B2 100 points": lambda: rht_detect(b2, DetectorConfig()),
        "rcd, B2 100 points": lambda: rcd_detect(b2, DetectorConfig()),
    }
    print(f"\n{'detector':36s} {'numpy ms':>10s} {'cython ms':>10s} {'speedup':>8s}  identical")
    for name, fn in detectors.items():
        out, t = {}, {}
        for be in ("python", "cython"):
            kernels.use_backend(be)
            out[be] = fn()
            t[be] = timeit(fn, args.repeat)
        kernels.use_backend("auto")
        print(f"{name:36s} {t['python']:10.2f} {t['cython']:10.2f} "
              f"{t['python'] / t['cython']:7.1f}x  {out['python'] == out['cython']}")


if __name__ == "__main__":
    main()
