"""Command line: ``gen``, ``run``, ``bench`` and ``verify``."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .harness import ALGORITHMS, RunConfig, bench_matrix, run, sweep_configs, write_csv
from .workload import FAMILIES, WorkloadSpec, generate, write_updates


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _spec(args) -> WorkloadSpec:
    return WorkloadSpec(args.family, args.n, args.k, seed=args.seed, p_edge=args.p_edge,
                        window=args.window, hot_set_size=args.hot_set_size,
                        hot_fraction=args.hot_fraction, clique_size=args.clique_size)


def _workload_flags(p: argparse.ArgumentParser, sized: bool = True) -> None:
    p.add_argument("--family", default="uniform", help=f"one of {', '.join(FAMILIES)}")
    if sized:
        p.add_argument("--n", type=int, required=True, help="vertex count")
        p.add_argument("--k", type=int, required=True, help="number of updates")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p-edge", type=float, default=0.5, help="edge probability (er)")
    p.add_argument("--window", type=int, default=None, help="live edge window (window; default n)")
    p.add_argument("--hot-set-size", type=int, default=None, help="hub count (hub; default ceil sqrt n)")
    p.add_argument("--hot-fraction", type=float, default=0.5, help="share of hub updates (hub)")
    p.add_argument("--clique-size", type=int, default=16, help="clique size (clique)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynmis", description="Dynamic MIS algorithms and benchmark harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a workload to an update file")
    _workload_flags(g)
    g.add_argument("--out", default=None, help="output file (stdout if omitted)")

    r = sub.add_parser("run", help="run one algorithm and emit a CSV row")
    r.add_argument("--algo", required=True, help=f"one of {', '.join(ALGORITHMS)}")
    _workload_flags(r, sized=False)
    r.add_argument("--n", type=int, default=None)
    r.add_argument("--k", type=int, default=None)
    r.add_argument("--input", default=None, help="replay an update file instead of generating")
    r.add_argument("--verify-every", type=int, default=0, help="check the MIS every N updates (0 = off)")
    r.add_argument("--audit-every", type=int, default=0, help="full internal recount every N updates")
    r.add_argument("--out", default=None, help="CSV file to append to (stdout if omitted)")

    b = sub.add_parser("bench", help="run a size x seed matrix and fit log-log slopes")
    b.add_argument("--algo", default=",".join(ALGORITHMS), help="comma-separated algorithms")
    _workload_flags(b, sized=False)
    b.add_argument("--n", type=_int_list, default=[256, 512, 1024, 2048, 4096], help="comma-separated sizes")
    b.add_argument("--k", type=int, default=None, help="fixed update count (default: k-per-n * n)")
    b.add_argument("--k-per-n", type=float, default=50.0)
    b.add_argument("--seeds", type=int, default=5, help="seeds 0..S-1 per size")
    b.add_argument("--verify-every", type=int, default=0)
    b.add_argument("--workers", type=int, default=1, help="parallel trial processes")
    b.add_argument("--out", default=None, help="CSV file (stdout if omitted)")

    v = sub.add_parser("verify", help="replay an update file, checking the MIS after every update")
    v.add_argument("--algo", required=True)
    v.add_argument("--input", required=True)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", default=None)
    return parser


def _cmd_gen(args) -> int:
    spec = _spec(args)
    events = generate(spec)
    write_updates(spec.n, events, args.out if args.out else sys.stdout)
    return 0


def _emit(results, out) -> None:
    if out:
        write_csv(results, out, append=True)
    else:
        write_csv(results, sys.stdout)


def _report(results) -> int:
    bad = 0
    for res in results:
        if res.error is not None:
            print(f"error: {res.config.algo} n={res.n}: {res.error}", file=sys.stderr)
            bad += 1
        elif res.meter.verify_failures:
            print(f"verify failures: {res.config.algo} n={res.n}: {res.meter.verify_failures}", file=sys.stderr)
            bad += 1
    return 1 if bad else 0


def _cmd_run(args) -> int:
    if args.input:
        cfg = RunConfig(args.algo, updates_path=args.input, seed=args.seed,
                        verify_every=args.verify_every, audit_every=args.audit_every)
    else:
        if args.n is None or args.k is None:
            raise SystemExit("run: --n and --k are required without --input")
        cfg = RunConfig(args.algo, workload=_spec(args), seed=args.seed,
                        verify_every=args.verify_every, audit_every=args.audit_every)
    res = run(cfg)
    _emit([res], args.out)
    return _report([res])


def _cmd_bench(args) -> int:
    algos = [a for a in args.algo.split(",") if a]
    kw = dict(p_edge=args.p_edge, window=args.window, hot_set_size=args.hot_set_size,
              hot_fraction=args.hot_fraction, clique_size=args.clique_size)
    configs = []
    for n in args.n:
        k_per_n = args.k / n if args.k is not None else args.k_per_n
        configs += sweep_configs(algos, args.family, [n], range(args.seeds), k_per_n=k_per_n,
                                 verify_every=args.verify_every, **kw)
    results, fits = bench_matrix(configs, workers=args.workers)
    _emit(results, args.out)
    for algo, fit in fits.items():
        print(f"slope {algo}: {fit.slope:.3f}", file=sys.stderr)
    return _report(results)


def _cmd_verify(args) -> int:
    cfg = RunConfig(args.algo, updates_path=args.input, seed=args.seed, verify_every=1)
    res = run(cfg)
    _emit([res], args.out)
    status = _report([res])
    print("OK" if status == 0 else "FAILED", file=sys.stderr)
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return {"gen": _cmd_gen, "run": _cmd_run, "bench": _cmd_bench, "verify": _cmd_verify}[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
