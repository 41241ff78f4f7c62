"""Seeded trial runner, report writers and the sample-complexity sweep."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .core import (
    TimeSignal,
    dft_naive,
    fft_dense,
    idft_naive,
    is_power_of_two,
    spawn_rngs,
    tail_err,
)
from .exact import ExactParams, ExactTrace, noiseless_sparse_fft
from .general import GeneralConfig, GeneralTrace, sparse_fft
from .reduction import full_dft_via_sparse
from .signals import gen_exact_sparse, gen_noisy_sparse, head_for_ratio

__all__ = [
    "TrialConfig",
    "TrialResult",
    "TrialReport",
    "run_trials",
    "write_report",
    "report_csv",
    "report_json",
    "SweepPoint",
    "SweepReport",
    "scaling_sweep",
    "worker_count",
    "CSV_COLUMNS",
]

ALGORITHMS = ("exact", "general", "reduction")
CSV_COLUMNS = ("trial", "success", "l2_err", "tail_err", "samples", "wall_ns", "z_l0_peak")
# dense oracle above this length uses the radix-2 FFT instead of the O(n^2) sum
NAIVE_ORACLE_LIMIT = 8192

_EXACT_CONSTS = {"beta", "c_alpha", "alpha_cap"}
_GENERAL_CONSTS = {f for f in GeneralConfig.__dataclass_fields__}


@dataclass(frozen=True)
class TrialConfig:
    algorithm: str = "exact"
    n: int = 4096
    k: int = 16
    L: int = 1023
    eps: float = 1.0
    delta: float = 0.01
    noise: float = 1.0
    head: float | None = None
    trials: int = 10
    seed: int = 0
    threshold: float = 2.0 / 3.0
    consts: dict = field(default_factory=dict)
    timing: bool = True

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if not is_power_of_two(self.n):
            raise ValueError(f"n must be a power of two, got {self.n}")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"need 0 <= k <= n, got k={self.k}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.algorithm == "reduction" and (self.k < 1 or not is_power_of_two(self.k)):
            raise ValueError("reduction needs k a power of two")
        known = _EXACT_CONSTS | _GENERAL_CONSTS
        bad = set(self.consts) - known
        if bad:
            raise ValueError(f"unknown constants {sorted(bad)}; known: {sorted(known)}")

    def exact_params(self) -> ExactParams:
        return replace(ExactParams(), **{k: float(v) for k, v in self.consts.items() if k in _EXACT_CONSTS})

    def general_config(self) -> GeneralConfig:
        over = {}
        for name, v in self.consts.items():
            if name in _GENERAL_CONSTS:
                typ = GeneralConfig.__dataclass_fields__[name].type
                over[name] = int(v) if typ == "int" else float(v)
        return replace(GeneralConfig(), **over)

    def head_magnitude(self) -> float:
        if self.head is not None:
            return self.head
        return head_for_ratio(self.n, self.k, self.noise) if self.noise > 0 else 1.0


@dataclass(frozen=True)
class TrialResult:
    trial: int
    success: bool
    l2_err: float
    tail_err: float
    samples: int
    wall_ns: int
    z_l0_peak: int


@dataclass
class TrialReport:
    config: TrialConfig
    results: list[TrialResult]

    @property
    def success_rate(self) -> float:
        return sum(r.success for r in self.results) / len(self.results)

    @property
    def passed(self) -> bool:
        return self.success_rate >= self.config.threshold

    def summary(self) -> dict:
        errs = np.array([r.l2_err for r in self.results])
        samples = np.array([r.samples for r in self.results], dtype=np.float64)
        n, k = self.config.n, max(self.config.k, 1)
        klogn = k * math.log2(n)
        klognk = k * math.log2(max(n / k, 2.0))
        return {
            "success_rate": self.success_rate,
            "median_l2_err": float(np.median(errs)),
            "p95_l2_err": float(np.percentile(errs, 95)),
            "median_samples": float(np.median(samples)),
            "samples_per_k_log_n": float(np.median(samples)) / klogn,
            "samples_per_k_log_n_over_k": float(np.median(samples)) / klognk,
        }


def worker_count(trials: int) -> int:
    """Pool size: SFFT_THREADS if set, else the CPU count, never above ``trials``."""
    env = os.environ.get("SFFT_THREADS")
    if env:
        try:
            cap = int(env)
        except ValueError as exc:
            raise ValueError(f"SFFT_THREADS must be an integer, got {env!r}") from exc
        if cap < 1:
            raise ValueError("SFFT_THREADS must be at least 1")
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, trials))


def _oracle_spectrum(x: TimeSignal) -> np.ndarray:
    x = x.uncounted_copy()
    if x.n <= NAIVE_ORACLE_LIMIT:
        return dft_naive(x.dense())
    return fft_dense(x.dense())


def _run_exact(cfg: TrialConfig, rng: np.random.Generator):
    x, _ = gen_exact_sparse(cfg.n, cfg.k, cfg.L, rng)
    trace = ExactTrace()
    t0 = time.perf_counter_ns()
    z = noiseless_sparse_fft(x, cfg.k, cfg.L, rng, cfg.exact_params(), trace)
    wall = time.perf_counter_ns() - t0
    xhat = _oracle_spectrum(x)
    truth = np.round(xhat)
    if np.max(np.abs(xhat - truth), initial=0.0) > 1e-6:
        raise RuntimeError("oracle spectrum is not integer valued")
    zd = z.to_dense()
    success = bool(np.array_equal(zd, truth))
    return success, float(np.linalg.norm(xhat - zd)), tail_err(xhat, cfg.k), x.reads, wall, trace.peak_nnz


def _run_general(cfg: TrialConfig, rng: np.random.Generator):
    x, _ = gen_noisy_sparse(cfg.n, cfg.k, cfg.head_magnitude(), cfg.noise, rng)
    x.reset_reads()  # synthesis is oracle-side
    trace = GeneralTrace()
    t0 = time.perf_counter_ns()
    z = sparse_fft(x, cfg.k, cfg.eps, cfg.delta, rng, cfg.general_config(), trace)
    wall = time.perf_counter_ns() - t0
    xhat = _oracle_spectrum(x)
    err = float(np.linalg.norm(xhat - z.to_dense()))
    tail = tail_err(xhat, cfg.k)
    success = err <= (1.0 + cfg.eps) * tail + cfg.delta * float(np.linalg.norm(xhat))
    return bool(success), err, tail, x.reads, wall, trace.peak_nnz


def _run_reduction(cfg: TrialConfig, rng: np.random.Generator):
    k = cfg.k
    spec = rng.integers(-cfg.L, cfg.L + 1, size=k) + 1j * rng.integers(-cfg.L, cfg.L + 1, size=k)
    x = TimeSignal(idft_naive(spec))
    t0 = time.perf_counter_ns()
    got = full_dft_via_sparse(x, cfg.n, rng, cfg.L, cfg.exact_params())
    wall = time.perf_counter_ns() - t0
    truth = np.round(dft_naive(x.uncounted_copy().dense()))
    success = bool(np.array_equal(got, truth))
    peak = int(np.count_nonzero(got))
    return success, float(np.linalg.norm(truth - got)), 0.0, x.reads, wall, peak


_RUNNERS = {"exact": _run_exact, "general": _run_general, "reduction": _run_reduction}


def _one(cfg: TrialConfig, index: int, rng: np.random.Generator) -> TrialResult:
    success, err, tail, samples, wall, peak = _RUNNERS[cfg.algorithm](cfg, rng)
    return TrialResult(index, success, err, tail, int(samples), int(wall) if cfg.timing else 0, int(peak))


def run_trials(cfg: TrialConfig, workers: int | None = None) -> TrialReport:
    """Run ``cfg.trials`` independent trials; results are ordered by trial index."""
    rngs = spawn_rngs(cfg.seed, cfg.trials)
    workers = worker_count(cfg.trials) if workers is None else max(1, workers)
    if workers == 1:
        results = [_one(cfg, i, r) for i, r in enumerate(rngs)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda ir: _one(cfg, *ir), enumerate(rngs)))
    return TrialReport(cfg, results)


# ---------------------------------------------------------------------------
# Report files
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def report_csv(report: TrialReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.results:
        w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def report_json(report: TrialReport) -> str:
    doc = {
        "config": asdict(report.config),
        "trials": [asdict(r) for r in report.results],
        "summary": report.summary(),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_report(report: TrialReport, path: str | Path, fmt: str = "csv") -> None:
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    text = report_csv(report) if fmt == "csv" else report_json(report)
    Path(path).write_text(text)


# ---------------------------------------------------------------------------
# Sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    algorithm: str
    n: int
    k: int
    median_samples: float
    median_wall_ns: float
    dense_fft_ns: float
    success_rate: float
    ratio: float  # samples over the claimed complexity shape


@dataclass
class SweepReport:
    points: list[SweepPoint]
    max_spread: float = 4.0

    def spread(self, algorithm: str) -> float:
        r = [p.ratio for p in self.points if p.algorithm == algorithm]
        return max(r) / min(r) if r else float("nan")

    def passed(self, algorithm: str) -> bool:
        return self.spread(algorithm) < self.max_spread

    def rows(self) -> list[dict]:
        return [asdict(p) for p in self.points]


def complexity_shape(algorithm: str, n: int, k: int) -> float:
    """k log2 n for the exact case, k log2 n log2(n/k) for the general case."""
    base = k * math.log2(n)
    if algorithm == "general":
        base *= math.log2(max(n / k, 2.0))
    return base


def _dense_fft_ns(n: int, reps: int = 3) -> float:
    v = np.random.default_rng(0).standard_normal(n) + 0j
    best = math.inf
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fft_dense(v)
        best = min(best, time.perf_counter_ns() - t0)
    return float(best)


def scaling_sweep(grid, base: TrialConfig, algorithms=("exact", "general"), max_spread: float = 4.0) -> SweepReport:
    """Median samples and wall time at each (n, k); k >= n points are refused."""
    points = []
    for algorithm in algorithms:
        for n, k in grid:
            if k >= n:
                raise ValueError(f"k={k} >= n={n}: a sparse transform cannot beat the dense one here")
            cfg = replace(base, algorithm=algorithm, n=n, k=k)
            rep = run_trials(cfg)
            s = float(np.median([r.samples for r in rep.results]))
            t = float(np.median([r.wall_ns for r in rep.results]))
            points.append(
                SweepPoint(algorithm, n, k, s, t, _dense_fft_ns(n), rep.success_rate, s / complexity_shape(algorithm, n, k))
            )
    return SweepReport(points, max_spread)
