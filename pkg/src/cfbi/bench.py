"""Seeded benchmark sweeps over the B1 and B2 synthetic recipes.

Every (grid point, trial) gets its own seed derived with
``numpy.random.SeedSequence`` from ``(base_seed, experiment, grid point,
trial, stream)``, so results do not depend on how trials are scheduled across
worker processes. Stream 0 feeds the dataset generator, streams 1-4 the
detectors.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .detector import DETECTORS, DetectorConfig
from .errors import CircleFitError, MissingCell
from .metrics import avg_distance, jaccard, rmse
from .synthgen import (B1_OUTLIER_COUNTS, B2_NOISE_PCTS, B2_OUTLIER_PCTS, B2_QS, B1Spec,
                       B2Spec, gen_b1, gen_b2)

CSV_HEADER = ["experiment", "detector", "noise_pct", "outliers", "q", "trial",
              "jaccard", "ad", "rmse", "elapsed_s", "error"]
EXPERIMENT_CODES = {"b1": 1, "b2": 2}
DETECTOR_STREAMS = {"fbi": 1, "rht": 2, "rcd": 3, "lsq": 4}
# B1 noise: sigma = 1 mm on a 100 mm radius
B1_NOISE_PCT = 1.0


def trial_seed(base_seed: int, experiment: str, grid: tuple, trial: int, stream: int = 0) -> int:
    """64-bit seed for one (grid point, trial, stream); SeedSequence hashing."""
    noise, outliers, q = grid
    entropy = [int(base_seed), EXPERIMENT_CODES[experiment], int(round(noise * 1000)),
               int(round(outliers * 1000)), int(q), int(trial), int(stream)]
    words = np.random.SeedSequence(entropy).generate_state(2, np.uint32)
    return int(words[0]) | (int(words[1]) << 32)


def default_grid(experiment: str, noise_pcts=None, outliers=None, qs=None) -> list[tuple]:
    """Grid points ``(noise_pct, outliers, q)``; outliers is a count for b1, a percentage for b2."""
    if experiment == "b1":
        return [(B1_NOISE_PCT, int(o), 0) for o in (outliers if outliers is not None
                                                     else B1_OUTLIER_COUNTS)]
    if experiment == "b2":
        return [(float(n), float(o), int(q))
                for q in (qs if qs is not None else B2_QS)
                for n in (noise_pcts if noise_pcts is not None else B2_NOISE_PCTS)
                for o in (outliers if outliers is not None else B2_OUTLIER_PCTS)]
    raise ValueError(f"unknown experiment {experiment!r}")


@dataclass
class SweepConfig:
    experiment: str = "b1"
    detectors: tuple = ("fbi",)
    trials: int = 100
    base_seed: int = 0
    grid: list | None = None
    out_dir: str | None = None
    n_triplets: int = 5000
    bin_size: float = 1.0
    workers: int = 1
    record_timing: bool = True

    def __post_init__(self):
        if self.experiment not in EXPERIMENT_CODES:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        self.detectors = tuple(self.detectors)
        if not self.detectors:
            raise ValueError("at least one detector is required")
        for d in self.detectors:
            if d not in DETECTORS:
                raise ValueError(f"unknown detector {d!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.grid is None:
            self.grid = default_grid(self.experiment)
        self.grid = [tuple(g) for g in self.grid]
        if not self.grid:
            raise ValueError("grid is empty")


@dataclass
class ResultRow:
    experiment: str
    detector: str
    noise_pct: float
    outliers: float
    q: int
    trial: object  # int, or "mean" / "sd" on aggregate rows
    jaccard: float
    ad: float
    rmse: float
    elapsed_s: float
    error: str = ""

    @property
    def grid(self):
        return (self.noise_pct, self.outliers, self.q)

    @property
    def is_aggregate(self) -> bool:
        return self.trial in ("mean", "sd")


def make_dataset(experiment: str, grid: tuple, seed: int):
    noise, outliers, q = grid
    if experiment == "b1":
        return gen_b1(B1Spec(n_outliers=int(outliers), sigma=noise / 100.0 * B1Spec.radius,
                             seed=seed))
    return gen_b2(B2Spec(noise_pct=noise, outlier_pct=outliers, q=int(q), seed=seed))


def _run_trial(job):
    experiment, grid, trial, detectors, base_seed, n_triplets, bin_size, timing = job
    noise, outliers, q = grid
    rows = []
    try:
        ds = make_dataset(experiment, grid, trial_seed(base_seed, experiment, grid, trial, 0))
    except CircleFitError as exc:
        return [ResultRow(experiment, d, noise, outliers, q, trial, 0.0, math.nan, math.nan,
                          0.0, f"generate:{type(exc).__name__}") for d in detectors]
    truth = ds.effective_truth
    for d in detectors:
        cfg = DetectorConfig(n_triplets=n_triplets, bin_size=bin_size,
                             rng_seed=trial_seed(base_seed, experiment, grid, trial,
                                                 DETECTOR_STREAMS[d]))
        t0 = time.perf_counter()
        try:
            fit = DETECTORS[d](ds.points, cfg)
            err = ""
        except CircleFitError as exc:
            fit = None
            err = type(exc).__name__
        elapsed = time.perf_counter() - t0 if timing else math.nan
        if fit is None:
            rows.append(ResultRow(experiment, d, noise, outliers, q, trial, 0.0, math.nan,
                                  math.nan, elapsed, err))
        else:
            rows.append(ResultRow(experiment, d, noise, outliers, q, trial, jaccard(fit, truth),
                                  avg_distance(fit, truth), rmse(fit, truth), elapsed, ""))
    return rows


def _stats(values):
    v = np.array([x for x in values if not math.isnan(x)], dtype=np.float64)
    if not len(v):
        return math.nan, math.nan
    return float(v.mean()), float(v.std(ddof=1)) if len(v) > 1 else 0.0


def aggregate_rows(trial_rows: list[ResultRow]) -> list[ResultRow]:
    """``mean`` and ``sd`` rows for one (detector, grid point).

    Failed trials count as Jaccard 0 and are left out of the AD/RMSE
    statistics; the aggregate ``error`` column reports how many failed.
    """
    r0 = trial_rows[0]
    failures = sum(1 for r in trial_rows if r.error)
    out = []
    for which in (0, 1):
        vals = [_stats([getattr(r, m) for r in trial_rows])[which]
                for m in ("jaccard", "ad", "rmse", "elapsed_s")]
        out.append(ResultRow(r0.experiment, r0.detector, r0.noise_pct, r0.outliers, r0.q,
                             ("mean", "sd")[which], *vals,
                             f"failures={failures}" if failures else ""))
    return out


def run_sweep(cfg: SweepConfig, progress=None) -> list[ResultRow]:
    """Run every detector on every (grid point, trial); returns trial and aggregate rows.

    Rows are ordered by grid point (config order), detector (config order),
    then trial, with the ``mean`` and ``sd`` rows last. When ``cfg.out_dir``
    is set the rows are also written to ``<out_dir>/<experiment>.csv``.
    """
    jobs = [(cfg.experiment, g, t, cfg.detectors, cfg.base_seed, cfg.n_triplets, cfg.bin_size,
             cfg.record_timing) for g in cfg.grid for t in range(cfg.trials)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_trial, jobs, chunksize=max(1, len(jobs) // (cfg.workers * 8))))
    else:
        results = []
        for job in jobs:
            results.append(_run_trial(job))
            if progress:
                progress(len(results), len(jobs))
    by_key = {}
    for rows in results:
        for r in rows:
            by_key.setdefault((r.grid, r.detector), []).append(r)
    out = []
    for g in cfg.grid:
        for d in cfg.detectors:
            trial_rows = sorted(by_key[(g, d)], key=lambda r: r.trial)
            out.extend(trial_rows)
            out.extend(aggregate_rows(trial_rows))
    if cfg.out_dir:
        path = Path(cfg.out_dir)
        path.mkdir(parents=True, exist_ok=True)
        write_rows(out, path / f"{cfg.experiment}.csv")
    return out


def _fmt(v) -> str:
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def write_rows(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([_fmt(getattr(r, name)) for name in CSV_HEADER])


def _num(s: str) -> float:
    return math.nan if s == "" else float(s)


def read_rows(path) -> list[ResultRow]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        rows = []
        for d in reader:
            trial = d["trial"] if d["trial"] in ("mean", "sd") else int(d["trial"])
            rows.append(ResultRow(d["experiment"], d["detector"], float(d["noise_pct"]),
                                  float(d["outliers"]), int(d["q"]), trial, _num(d["jaccard"]),
                                  _num(d["ad"]), _num(d["rmse"]), _num(d["elapsed_s"]),
                                  d["error"]))
    return rows


def means(rows, metric: str = "jaccard") -> dict:
    """``{(detector, grid): mean}`` from the aggregate rows."""
    return {(r.detector, r.grid): getattr(r, metric) for r in rows if r.trial == "mean"}


@dataclass
class WinnerTable:
    cells: dict = field(default_factory=dict)   # grid -> winning detector
    wins: dict = field(default_factory=dict)    # detector -> number of cells won
    wins_by_q: dict = field(default_factory=dict)  # q -> {detector: wins}


def winner_matrix(rows) -> WinnerTable:
    """Best detector (highest mean Jaccard) per grid cell and win counts.

    Ties go to the detector that appears first in ``rows``.

    Raises
    ------
    MissingCell
        If the detectors were not all evaluated on the same grid.
    """
    agg = [r for r in rows if r.trial == "mean"]
    detectors = list(dict.fromkeys(r.detector for r in agg))
    grids = {d: {} for d in detectors}
    order = []
    for r in agg:
        grids[r.detector][r.grid] = r.jaccard
        if r.grid not in order:
            order.append(r.grid)
    ref = set(order)
    for d in detectors:
        if set(grids[d]) != ref:
            raise MissingCell(f"detector {d} lacks cells {sorted(ref - set(grids[d]))[:3]}")
    table = WinnerTable(wins={d: 0 for d in detectors})
    for g in order:
        best = None
        for d in detectors:
            v = grids[d][g]
            v = -math.inf if math.isnan(v) else v
            if best is None or v > best[1]:
                best = (d, v)
        table.cells[g] = best[0]
        table.wins[best[0]] += 1
        byq = table.wins_by_q.setdefault(g[2], {d: 0 for d in detectors})
        byq[best[0]] += 1
    return table
