"""Monte Carlo experiments: data generation with discretization, repeated tests, rejection rates."""
from __future__ import annotations

import csv
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.stats import binomtest

from .copulas import parse_copula
from .errors import DomainError, ExperimentAborted
from .procedures import TestKind, run_named_test
from .rng import SeedSpec

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "discretize",
    "run_experiment",
    "write_summary",
    "RESULTS_HEADER",
    "SUMMARY_HEADER",
]

log = logging.getLogger(__name__)

RESULTS_HEADER = ["rep", "seed_path", "statistic", "p_value", "reject"]
SUMMARY_HEADER = ["family", "tau", "n", "k", "t", "test", "adapted", "rejection_pct", "ci_lo", "ci_hi"]
MAX_FAILED_FRACTION = 0.01


def discretize(sample, k, t: float = 1.0) -> np.ndarray:
    """Replace each entry by the center of its bin ``(a_m, a_{m+1}]``, ``a_i = (i/k)**t``.

    ``k = math.inf`` leaves the sample unchanged.
    """
    u = np.asarray(sample, dtype=float)
    if np.any(~(u > 0)) or np.any(u > 1):
        raise DomainError("discretize expects entries in (0, 1]")
    if k == math.inf:
        return u.copy()
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer or infinity, got {k!r}")
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    k = int(k)
    a = (np.arange(k + 1) / k) ** t
    a[-1] = 1.0
    m = np.clip(np.searchsorted(a, u, side="left") - 1, 0, k - 1)
    return (a[m] + a[m + 1]) / 2


@dataclass(frozen=True)
class ExperimentConfig:
    copula: str
    n: int
    test: str
    tau: float | None = None
    dim: int = 2
    k: float = math.inf
    t: float = 1.0
    family: str | None = None  # hypothesized family for the goodness-of-fit test
    estimator: str = "mpl"
    adapted: bool = True
    n_boot: int | None = None
    reps: int = 1000
    alpha: float = 0.05
    seed: int = 0

    def __post_init__(self):
        TestKind(self.test)
        if self.n < 2:
            raise DomainError("n must be at least 2")
        if not (self.k == math.inf or (int(self.k) == self.k and self.k >= 1)):
            raise DomainError("k must be a positive integer or inf")
        if self.reps < 1:
            raise DomainError("reps must be positive")
        if not 0 < self.alpha < 1:
            raise DomainError("alpha must lie in (0, 1)")
        if self.test == TestKind.GoF.value and not self.family:
            raise DomainError("the gof test needs a hypothesized family")

    def model(self):
        return parse_copula(self.copula, self.tau, self.dim)

    def test_label(self) -> str:
        if self.test == TestKind.GoF.value:
            return f"gof:{self.family}:{self.estimator}"
        return self.test


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rejection_rate: float
    wilson_ci: tuple
    reps_completed: int
    reps_failed: int = 0
    wall_time: float = 0.0

    def summary_row(self) -> dict:
        c = self.config
        return {
            "family": c.copula,
            "tau": "" if c.tau is None else c.tau,
            "n": c.n,
            "k": "inf" if c.k == math.inf else int(c.k),
            "t": c.t,
            "test": c.test_label(),
            "adapted": c.adapted,
            "rejection_pct": round(100 * self.rejection_rate, 4),
            "ci_lo": round(100 * self.wilson_ci[0], 4),
            "ci_hi": round(100 * self.wilson_ci[1], 4),
        }


def generate_sample(cfg: ExperimentConfig, seed: SeedSpec) -> np.ndarray:
    u = cfg.model().sample(cfg.n, seed.generator())
    return discretize(u, cfg.k, cfg.t)


def _run_rep(cfg: ExperimentConfig, r: int) -> dict:
    stream = SeedSpec(cfg.seed, (r,))
    try:
        x = generate_sample(cfg, stream.child(0))
        rep = run_named_test(
            x,
            cfg.test,
            family=cfg.family,
            estimator=cfg.estimator,
            n_boot=cfg.n_boot,
            seed=stream.child(1),
            adapted=cfg.adapted,
        )
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        log.warning("repetition %d failed: %s", r, exc)
        return {"rep": r, "seed_path": stream.path_str(), "statistic": "nan", "p_value": "nan", "reject": -1}
    return {
        "rep": r,
        "seed_path": stream.path_str(),
        "statistic": repr(rep.statistic.value),
        "p_value": repr(rep.p_value),
        "reject": int(rep.p_value <= cfg.alpha),
    }


def _read_records(path: Path) -> dict[int, dict]:
    if not path.exists() or path.stat().st_size == 0:
        return {}
    raw = path.read_bytes()
    if not raw.endswith(b"\n"):
        # an interrupted write left a partial record; drop it
        raw = raw[: raw.rfind(b"\n") + 1]
        path.write_bytes(raw)
        if not raw:
            return {}
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RESULTS_HEADER:
            raise DomainError(f"{path} is not a results file (header {reader.fieldnames})")
        records = {}
        for row in reader:
            row["rep"] = int(row["rep"])
            row["reject"] = int(row["reject"])
            records[row["rep"]] = row
    return records


def _wilson(successes: int, trials: int) -> tuple:
    ci = binomtest(successes, trials).proportion_ci(confidence_level=0.95, method="wilson")
    return (float(ci.low), float(ci.high))


def run_experiment(cfg: ExperimentConfig, jobs: int = 1, results_path=None) -> ExperimentResult:
    """Run ``cfg.reps`` repetitions (resuming from ``results_path`` if it holds some)."""
    start = time.perf_counter()
    cfg.model()  # fail fast on a bad copula spec
    records: dict[int, dict] = {}
    path = Path(results_path) if results_path is not None else None
    if path is not None:
        records = _read_records(path)
    todo = [r for r in range(cfg.reps) if r not in records]
    max_failed = math.floor(MAX_FAILED_FRACTION * cfg.reps)
    failed = sum(1 for rec in records.values() if rec["reject"] < 0 and rec["rep"] < cfg.reps)

    fh = writer = None
    if path is not None:
        new_file = not path.exists() or path.stat().st_size == 0
        fh = path.open("a", newline="")
        writer = csv.DictWriter(fh, fieldnames=RESULTS_HEADER)
        if new_file:
            writer.writeheader()
    try:
        if jobs > 1 and len(todo) > 1:
            pool = ProcessPoolExecutor(max_workers=jobs)
            results = pool.map(_run_rep, [cfg] * len(todo), todo, chunksize=max(1, len(todo) // (4 * jobs)))
        else:
            pool = None
            results = (_run_rep(cfg, r) for r in todo)
        try:
            for rec in results:
                records[rec["rep"]] = rec
                if writer is not None:
                    writer.writerow(rec)
                    fh.flush()
                if rec["reject"] < 0:
                    failed += 1
                    if failed > max_failed:
                        raise ExperimentAborted(
                            f"{failed} of {cfg.reps} repetitions failed (limit {max_failed})"
                        )
        finally:
            if pool is not None:
                pool.shutdown(cancel_futures=True)
    finally:
        if fh is not None:
            fh.close()

    done = [records[r] for r in range(cfg.reps)]
    ok = [rec for rec in done if rec["reject"] >= 0]
    rejections = sum(rec["reject"] for rec in ok)
    rate = rejections / len(ok)
    return ExperimentResult(
        cfg,
        rate,
        _wilson(rejections, len(ok)),
        reps_completed=len(ok),
        reps_failed=len(done) - len(ok),
        wall_time=time.perf_counter() - start,
    )


def write_summary(results, path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_HEADER)
        writer.writeheader()
        for res in results:
            writer.writerow(res.summary_row())
