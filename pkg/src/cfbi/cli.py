"""Command line entry point: ``cfbi {gen,detect,bench-b1,bench-b2,report}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench, kernels, report
from .detector import DETECTORS, DetectorConfig, PointSet, detect, fbi_detect
from .errors import CircleFitError
from .imageio import PGM_THRESHOLD, edgels, load_edge_image
from .synthgen import B1Spec, B2Spec, gen_b1, gen_b2, read_points_csv, write_csv


def _csv_list(kind):
    def parse(text):
        try:
            return [kind(t) for t in text.split(",") if t.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return parse


def _detectors(text):
    names = [t.strip() for t in text.split(",") if t.strip()]
    bad = [n for n in names if n not in DETECTORS]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"unknown detector(s) {bad}; choose from {sorted(DETECTORS)}")
    return names


def _common(p, trials=True):
    p.add_argument("--seed", type=int, default=0, help="base random seed (default 0)")
    p.add_argument("--n-triplets", type=int, default=5000)
    p.add_argument("--bin-size", type=float, default=1.0)
    if trials:
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--detectors", type=_detectors, default=["fbi"],
                       help="comma separated subset of fbi,rht,rcd,lsq")
        p.add_argument("--out-dir", default="results")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--no-timing", action="store_true",
                       help="leave elapsed_s empty so repeated runs are byte-identical")


def build_parser():
    ap = argparse.ArgumentParser(prog="cfbi", description=__doc__)
    ap.add_argument("--backend", choices=["auto", "cython", "python"], default="auto",
                    help="kernel implementation (default: compiled if available)")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic dataset as CSV (+ JSON sidecar)")
    g.add_argument("experiment", choices=["b1", "b2"])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--outliers", type=int, default=0, help="b1: number of outliers")
    g.add_argument("--noise-pct", type=float, default=0.0, help="b2: radial noise, %% of radius")
    g.add_argument("--outlier-pct", type=float, default=0.0, help="b2: outlier percentage")
    g.add_argument("--q", type=int, default=0, help="b2: quantization step (0 = continuous)")
    g.add_argument("--out", required=True, help="output CSV path")

    d = sub.add_parser("detect", help="fit a circle to an edge image or point CSV")
    d.add_argument("input", help=".pbm/.pgm edge image or .csv with x,y columns")
    d.add_argument("--detector", choices=sorted(DETECTORS), default="fbi")
    d.add_argument("--threshold", type=int, default=PGM_THRESHOLD,
                   help="PGM binarization threshold (pixels below are edgels)")
    _common(d, trials=False)

    for name, exp in (("bench-b1", "b1"), ("bench-b2", "b2")):
        b = sub.add_parser(name, help=f"run the {exp.upper()} sweep")
        _common(b)
        if exp == "b1":
            b.add_argument("--outliers", type=_csv_list(int), default=None,
                           help="outlier counts (default 0,1,2,3,4,5)")
        else:
            b.add_argument("--noise-pcts", type=_csv_list(float), default=None)
            b.add_argument("--outlier-pcts", type=_csv_list(float), default=None)
            b.add_argument("--qs", type=_csv_list(int), default=None)
        b.set_defaults(experiment=exp)

    r = sub.add_parser("report", help="SVG heatmaps and winner matrix from a sweep CSV")
    r.add_argument("csv")
    r.add_argument("--out-dir", default="report")
    r.add_argument("--metrics", type=_csv_list(str), default=["jaccard", "ad", "rmse"])
    return ap


def _cmd_gen(a):
    if a.experiment == "b1":
        ds = gen_b1(B1Spec(n_outliers=a.outliers, seed=a.seed))
    else:
        ds = gen_b2(B2Spec(noise_pct=a.noise_pct, outlier_pct=a.outlier_pct, q=a.q, seed=a.seed))
    Path(a.out).parent.mkdir(parents=True, exist_ok=True)
    side = write_csv(ds, a.out)
    print(f"wrote {len(ds.points)} points to {a.out} (metadata {side})")


def _load_points(a) -> PointSet:
    path = Path(a.input)
    if path.suffix.lower() in (".pbm", ".pgm"):
        return edgels(load_edge_image(path, path.suffix.lower()[1:], a.threshold))
    pts, _ = read_points_csv(path)
    return PointSet(pts)


def _cmd_detect(a):
    pts = _load_points(a)
    cfg = DetectorConfig(n_triplets=a.n_triplets, bin_size=a.bin_size, rng_seed=a.seed)
    out = {"detector": a.detector, "n_points": len(pts)}
    if a.detector == "fbi":
        res = fbi_detect(pts, cfg)
        c = res.circle
        out.update(votes_accepted=res.votes_accepted, rejected=res.rejected,
                   degenerate=res.degenerate_count, draws=res.draws)
    else:
        c = detect(a.detector, pts, cfg)
    out.update(xc=c.xc, yc=c.yc, r=c.r)
    print(json.dumps(out))


def _cmd_bench(a):
    if a.experiment == "b1":
        grid = bench.default_grid("b1", outliers=a.outliers)
    else:
        grid = bench.default_grid("b2", a.noise_pcts, a.outlier_pcts, a.qs)
    cfg = bench.SweepConfig(a.experiment, tuple(a.detectors), a.trials, a.seed, grid, a.out_dir,
                            a.n_triplets, a.bin_size, a.workers, not a.no_timing)
    rows = bench.run_sweep(cfg)
    path = Path(a.out_dir) / f"{a.experiment}.csv"
    print(f"wrote {len(rows)} rows to {path}")
    for r in rows:
        if r.trial == "mean":
            print(f"{r.detector}\tnoise={r.noise_pct:g}%\toutliers={r.outliers:g}\tq={r.q}\t"
                  f"jaccard={r.jaccard:.4f}\tad={r.ad:.3f}\trmse={r.rmse:.3f}"
                  + (f"\t{r.error}" if r.error else ""))


def _cmd_report(a):
    rows = bench.read_rows(a.csv)
    out = Path(a.out_dir)
    dets = list(dict.fromkeys(r.detector for r in rows))
    n = 0
    for d in dets:
        for m in a.metrics:
            n += len(report.emit_heatmap(rows, m, out, detector=d))
    text = report.format_winners(bench.winner_matrix(rows))
    out.mkdir(parents=True, exist_ok=True)
    (out / "winners.tsv").write_text(text)
    print(text, end="")
    print(f"wrote {n} heatmaps and winners.tsv to {out}")


COMMANDS = {"gen": _cmd_gen, "detect": _cmd_detect, "bench-b1": _cmd_bench,
            "bench-b2": _cmd_bench, "report": _cmd_report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        kernels.use_backend(args.backend)
        COMMANDS[args.command](args)
    except (CircleFitError, OSError, ValueError, ImportError) as exc:
        print(f"cfbi: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
