"""Run algorithms over workloads, verify them, and collect CSV metrics and scaling fits."""

from __future__ import annotations

import csv
import gc
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .det import DetAlgorithm
from .graph import UpdateEvent
from .m13 import M13Mis
from .meter import Cause, WorkMeter
from .oracle import MisChecker, verify_mis
from .sqrtn import SqrtNMis
from .warmup import WarmupMis
from .workload import WorkloadSpec, generate, read_updates

ALGORITHMS = {
    "Det": DetAlgorithm,
    "WarmupN23": WarmupMis,
    "M13": M13Mis,
    "SqrtN": SqrtNMis,
}

CSV_COLUMNS = (
    "algo", "family", "n", "k_updates", "seed", "work_units", "wall_ns", "phases_total",
    "ph_th", "ph_ti", "ph_tl", "ph_texp", "ph_parent", "ph_epoch", "max_deltaL", "verify_failures",
)


def algorithm_name(name: str) -> str:
    for key in ALGORITHMS:
        if key.lower() == name.lower():
            return key
    raise ValueError(f"unknown algorithm {name!r}; expected one of {', '.join(ALGORITHMS)}")


def make_algorithm(name: str, n: int, seed: int = 0, meter: Optional[WorkMeter] = None):
    return ALGORITHMS[algorithm_name(name)](n, seed=seed, meter=meter)


@dataclass(frozen=True)
class RunConfig:
    algo: str
    workload: Optional[WorkloadSpec] = None
    updates_path: Optional[str] = None
    verify_every: int = 0
    audit_every: int = 0
    seed: int = 0
    out: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "algo", algorithm_name(self.algo))
        if self.verify_every < 0 or self.audit_every < 0:
            raise ValueError("verify_every and audit_every must be non-negative")
        if (self.workload is None) == (self.updates_path is None):
            raise ValueError("give exactly one of a workload spec or an updates file")

    @property
    def family(self) -> str:
        return self.workload.family if self.workload is not None else "file"

    def load(self) -> tuple[int, list[UpdateEvent]]:
        if self.workload is not None:
            return self.workload.n, generate(self.workload)
        return read_updates(self.updates_path)


@dataclass
class RunResult:
    config: RunConfig
    n: int
    k: int
    meter: WorkMeter
    mis: set = field(default_factory=set)
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.meter.verify_failures == 0

    @property
    def work_per_update(self) -> float:
        return self.meter.work_units / max(self.k, 1)

    def row(self) -> dict:
        m = self.meter
        by = m.phases_by_cause
        return {
            "algo": self.config.algo,
            "family": self.config.family,
            "n": self.n,
            "k_updates": self.k,
            "seed": self.config.seed,
            "work_units": m.work_units,
            "wall_ns": m.wall_ns,
            "phases_total": m.phases_total,
            "ph_th": by[Cause.TH],
            "ph_ti": by[Cause.TI],
            "ph_tl": by[Cause.TL],
            "ph_texp": by[Cause.TEXP],
            "ph_parent": by[Cause.PARENT],
            "ph_epoch": by[Cause.EPOCH],
            "max_deltaL": m.max_delta_l,
            "verify_failures": m.verify_failures,
        }


def execute(algo_name: str, n: int, events: Sequence[UpdateEvent], seed: int = 0,
            verify_every: int = 0, audit_every: int = 0,
            on_failure: Optional[Callable[[int, object], None]] = None):
    """Drive one algorithm instance; returns ``(algorithm, meter)``.

    With ``verify_every = v > 0`` the reported set is checked after every v-th
    update (and after the last) by an incremental checker that reads only the
    graph and the membership flags. ``audit_every`` runs the algorithm's own
    full-recount audit at that stride; its AssertionError propagates.
    """
    meter = WorkMeter()
    algo = make_algorithm(algo_name, n, seed=seed, meter=meter)
    checker = MisChecker(algo.graph) if verify_every else None
    if checker is not None:
        checker.sync(algo.member)
        if not checker.ok:
            meter.verify_failures += 1
    update = algo.update
    member = algo.member
    # rebuilds allocate many small acyclic sets; cyclic GC passes over them only cost time
    gc_was_on = gc.isenabled()
    gc.disable()
    t0 = time.perf_counter_ns()
    try:
        if checker is None and not audit_every:
            for ev in events:
                update(ev)
        else:
            last = len(events) - 1
            for i, ev in enumerate(events):
                update(ev)
                if checker is not None:
                    checker.edge(ev)
                    if (i + 1) % verify_every == 0 or i == last:
                        checker.sync(member)
                        if not checker.ok:
                            meter.verify_failures += 1
                            if on_failure is not None:
                                on_failure(i, verify_mis(algo.graph, algo.current_mis()))
                if audit_every and ((i + 1) % audit_every == 0 or i == last):
                    algo.audit()
    finally:
        meter.wall_ns = time.perf_counter_ns() - t0
        if gc_was_on:
            gc.enable()
    meter.updates = len(events)
    if verify_every and not verify_mis(algo.graph, algo.current_mis()):
        # final full-oracle check, independent of the incremental bookkeeping
        meter.verify_failures += 1
    algo.finish()
    return algo, meter


def run(config: RunConfig, events: Optional[Sequence[UpdateEvent]] = None) -> RunResult:
    """Execute ``config``; errors are captured in the result rather than raised."""
    try:
        if events is None:
            n, events = config.load()
        else:
            n = config.workload.n
    except Exception as exc:  # malformed input: nothing ran
        return RunResult(config, 0, 0, WorkMeter(), error=f"{type(exc).__name__}: {exc}")
    try:
        algo, meter = execute(config.algo, n, events, seed=config.seed,
                              verify_every=config.verify_every, audit_every=config.audit_every)
        result = RunResult(config, n, len(events), meter, algo.current_mis())
    except Exception as exc:
        result = RunResult(config, n, len(events), WorkMeter(), error=f"{type(exc).__name__}: {exc}")
    if config.out:
        write_csv([result], config.out, append=True)
    return result


# -- CSV ------------------------------------------------------------------------


def write_csv(results: Iterable[RunResult], sink: Union[str, Path, io.TextIOBase], append: bool = False) -> None:
    rows = [r.row() for r in results]
    if isinstance(sink, (str, Path)):
        path = Path(sink)
        fresh = not (append and path.exists() and path.stat().st_size > 0)
        with path.open("a" if append else "w", newline="", encoding="utf-8") as fh:
            _write_rows(fh, rows, header=fresh)
    else:
        _write_rows(sink, rows, header=True)


def _write_rows(fh, rows: list[dict], header: bool) -> None:
    w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
    if header:
        w.writeheader()
    w.writerows(rows)


def read_csv(source: Union[str, Path]) -> list[dict]:
    with Path(source).open(newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


# -- scaling fits -------------------------------------------------------------------


@dataclass(frozen=True)
class SlopeFit:
    algo: str
    slope: float
    intercept: float
    xs: tuple[float, ...]
    means: tuple[float, ...]


def fit_loglog(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Least-squares line through (log2 x, log2 y); returns (slope, intercept)."""
    if len(xs) < 2:
        raise ValueError("a slope needs at least two sizes")
    lx = np.log2(np.asarray(xs, dtype=float))
    ly = np.log2(np.asarray(ys, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    return float(slope), float(intercept)


def fit_slopes(results: Iterable[RunResult],
               x_of: Callable[[RunResult], float] = lambda r: r.n) -> dict[str, SlopeFit]:
    """Per algorithm: mean per-update work at each size (over seeds), then a log-log fit."""
    groups: dict[str, dict[float, list[float]]] = {}
    for r in results:
        if r.error is not None:
            continue
        groups.setdefault(r.config.algo, {}).setdefault(x_of(r), []).append(r.work_per_update)
    fits = {}
    for algo, by_x in groups.items():
        xs = sorted(by_x)
        means = [float(np.mean(by_x[x])) for x in xs]
        if len(xs) >= 2:
            s, c = fit_loglog(xs, means)
            fits[algo] = SlopeFit(algo, s, c, tuple(xs), tuple(means))
    return fits


def _run_one(config: RunConfig) -> RunResult:
    return run(config)


def bench_matrix(configs: Sequence[RunConfig], workers: int = 1,
                 x_of: Callable[[RunResult], float] = lambda r: r.n):
    """Run every config (optionally across processes) and fit slopes per algorithm.

    Row errors are recorded in their results and never abort the matrix.
    """
    configs = [replace(c, out=None) for c in configs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, configs))
    else:
        results = [_run_one(c) for c in configs]
    return results, fit_slopes(results, x_of)


def sweep_configs(algos: Iterable[str], family: str, sizes: Iterable[int], seeds: Iterable[int],
                  k_per_n: float = 50, verify_every: int = 0, **workload_kw) -> list[RunConfig]:
    out = []
    for algo in algos:
        for n in sizes:
            for seed in seeds:
                spec = WorkloadSpec(family, n, int(math.ceil(k_per_n * n)), seed=seed, **workload_kw)
                out.append(RunConfig(algo, workload=spec, seed=seed, verify_every=verify_every))
    return out
