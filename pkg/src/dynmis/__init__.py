"""Fully dynamic maximal independent set algorithms with work accounting."""

from .graph import DynamicGraph, GraphUpdateError, Kind, UpdateEvent, delete, insert
from .meter import Cause, WorkMeter
from .oracle import MisChecker, NotIndependent, NotMaximal, Valid, brute_force_lex_mis, greedy_mis, verify_mis
from .det import DetAlgorithm, DetMis
from .warmup import PhaseParams, WarmupMis, preprocess, warmup_run
from .m13 import M13Mis, epoch_params, m13_run
from .sqrtn import LevelParams, SqrtNMis, make_level_params, solve_exponent_chain, sqrtn_run
from .workload import WorkloadFormatError, WorkloadSpec, generate, read_updates, write_updates
from .harness import RunConfig, RunResult, bench_matrix, execute, fit_slopes, run

__all__ = [
    "DynamicGraph", "GraphUpdateError", "Kind", "UpdateEvent", "delete", "insert",
    "Cause", "WorkMeter",
    "MisChecker", "NotIndependent", "NotMaximal", "Valid", "brute_force_lex_mis", "greedy_mis",
    "verify_mis",
    "DetAlgorithm", "DetMis",
    "PhaseParams", "WarmupMis", "preprocess", "warmup_run",
    "M13Mis", "epoch_params", "m13_run",
    "LevelParams", "SqrtNMis", "make_level_params", "solve_exponent_chain", "sqrtn_run",
    "WorkloadFormatError", "WorkloadSpec", "generate", "read_updates", "write_updates",
    "RunConfig", "RunResult", "bench_matrix", "execute", "fit_slopes", "run",
]
