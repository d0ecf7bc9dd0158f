"""Nested-level dynamic MIS with O~(sqrt n) amortized work.

Level ``r`` samples ``H~^r`` over all vertices with probability ``p_r`` and
freezes the greedy MIS ``M^r`` of ``G[H^r]`` where ``H^r = H~^r`` restricted to
the previous level's low set ``L^{r-1}``. Vertices of ``L^{r-1}`` adjacent to
``M^r`` form ``I^r``; the rest form ``L^r``, whose induced subgraph ``G^r`` is
stored explicitly. The deepest graph ``G^R`` is handed to the counter engine,
and the answer is ``M^1 + ... + M^R`` plus the engine's MIS. A level phase ends
on an update inside the sampled sets, too many updates touching them, a degree
cap violation, its length cap, or the end of its parent phase; the level and
everything below it are then rebuilt from the current graph.

Per-vertex state: ``lvl[v]`` is the level at which ``v`` sits in ``H`` or
``I`` (``R + 1`` when ``v`` is in ``L^R``), so ``v`` is in ``L^r`` exactly when
``lvl[v] > r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .det import DetMis
from .graph import DynamicGraph, UpdateEvent
from .meter import Cause, WorkMeter
from .oracle import greedy_mis, greedy_on, verify_mis
from .rng import make_rng

_EMPTY: frozenset = frozenset()
CHAIN_TOL = 1e-12


def _chain(levels: int, start: float) -> list[float]:
    """Solve ``c + y[r-1] - 2 y[r] = y[R]`` for r = 1..R with ``y[0] = start`` and c = 1."""
    R = levels
    last = (start + 2 ** R - 1) / (2 ** (R + 1) - 1)
    y = [0.0] * (R + 1)
    y[0] = start
    y[R] = last
    for r in range(R, 1, -1):
        y[r - 1] = 2 * y[r] + last - 1
    return y[1:]


def _chain_residual(levels: int, start: float, y: Sequence[float]) -> float:
    full = [start, *y]
    last = full[-1]
    return max(abs(1 + full[r - 1] - 2 * full[r] - last) for r in range(1, levels + 1))


def solve_exponent_chain(levels: int) -> list[float]:
    """Exponents ``e`` with ``Delta_r ~ n^e[r]`` balancing every level's cost.

    Solves ``2 - 2e_1 = 1 + e_{r-1} - 2e_r = e_R`` and checks each equality.
    """
    if levels < 1:
        raise ValueError(f"need at least one level, got {levels}")
    e = _chain(levels, 1.0)
    res = _chain_residual(levels, 1.0, e)
    if res > CHAIN_TOL:
        raise ArithmeticError(f"exponent chain residual {res:.3g} for R={levels}")
    return e


def default_cost_scale(n: int) -> float:
    """Constant factor of the per-level rebuild cost: 24 * (5 ln n)^2."""
    return 600.0 * math.log(n) ** 2


@dataclass(frozen=True)
class LevelParams:
    """Per-level thresholds; tuples are indexed by ``level - 1``."""

    n: int
    R: int
    p: tuple[float, ...]
    delta: tuple[int, ...]
    T: tuple[int, ...]
    touch_cap: tuple[int, ...]
    exponents: tuple[float, ...] = ()
    delta_raw: tuple[float, ...] = ()

    @classmethod
    def from_probabilities(cls, n: int, ps: Sequence[float], exponents=(), delta_raw=()) -> "LevelParams":
        ln = max(math.log(n), 1.0)
        ps = tuple(float(q) for q in ps)
        if not ps or any(not 0 < q <= 1 for q in ps):
            raise ValueError(f"level probabilities must lie in (0, 1], got {ps}")
        return cls(
            n=n,
            R=len(ps),
            p=ps,
            delta=tuple(math.ceil(5.0 * ln / q) for q in ps),
            T=tuple(max(1, math.floor(1.0 / (24.0 * q * q))) for q in ps),
            touch_cap=tuple(max(1, math.ceil(1.0 / q)) for q in ps),
            exponents=tuple(exponents),
            delta_raw=tuple(delta_raw),
        )

    def spaced(self) -> bool:
        """True when probabilities at least double from each level to the next."""
        return all(self.p[i] >= 2 * self.p[i - 1] for i in range(1, self.R))


def _raw_deltas(n: int, levels: int, cost_scale: float) -> tuple[list[float], list[float]]:
    e = solve_exponent_chain(levels)
    f = _chain(levels, 0.0)
    ln_n = math.log(n)
    ln_c = math.log(cost_scale)
    return e, [math.exp(e[i] * ln_n + f[i] * ln_c) for i in range(levels)]


def make_level_params(n: int, levels: Optional[int] = None,
                      cost_scale: Optional[float] = None) -> LevelParams:
    """Level parameters balancing rebuild cost against the engine's degree.

    ``cost_scale`` is the constant in front of the level rebuild cost; the
    default folds in the factor hidden by the asymptotic chain, and 1 gives the
    bare ``Delta_r = n^{e_r}``. Without an explicit ``levels`` the count starts
    at ``round(2 log2 log2 n)`` and drops until the levels are spaced, the
    first probability is at least 1/n and the last at most 1.
    """
    if n < 4:
        raise ValueError(f"nested levels need n >= 4, got {n}")
    if cost_scale is None:
        cost_scale = default_cost_scale(n)
    ln_n = math.log(n)
    if levels is not None:
        candidates = [levels]
    else:
        top = max(1, round(2 * math.log2(math.log2(n))))
        candidates = list(range(top, 0, -1))
    for R in candidates:
        e, d = _raw_deltas(n, R, cost_scale)
        ps = [5 * ln_n / x for x in d]
        spaced = all(d[i - 1] >= 2 * d[i] for i in range(1, R))
        if spaced and ps[0] >= 1 / n and ps[-1] <= 1:
            return LevelParams.from_probabilities(n, ps, e, d)
    # tiny graphs: a single level with the probability clipped to 1
    e, d = _raw_deltas(n, 1, cost_scale)
    return LevelParams.from_probabilities(n, [min(1.0, 5 * ln_n / d[0])], e, d)


class SqrtNMis:
    """Nested-level algorithm; ``update`` applies each edge to ``graph`` itself."""

    name = "SqrtN"

    def __init__(self, n: int, seed: int = 0, params: Optional[LevelParams] = None,
                 meter: Optional[WorkMeter] = None, graph: Optional[DynamicGraph] = None):
        self.graph = graph if graph is not None else DynamicGraph(n)
        n = self.graph.n
        self.n = n
        self.params = params if params is not None else make_level_params(max(n, 4))
        R = self.params.R
        self.R = R
        self.meter = meter if meter is not None else WorkMeter()
        self.meter.ensure_levels(R)
        self.rng = make_rng(seed, "sqrtn")
        self.member = bytearray(n)
        self.engine = DetMis(n, member=self.member, meter=self.meter)
        self.lvl = [1] * n
        self.is_h = bytearray(n)
        self.in_m = bytearray(n)
        self.mc: list[list[int]] = [[] for _ in range(R + 1)]
        self.lg: list[Optional[dict]] = [None] * (R + 1)
        self.ht = np.zeros(n, dtype=np.int64)
        self.lo = [0] * n
        self.age = [0] * (R + 1)
        self.touched = [0] * (R + 1)
        self.level_preprocess(1)

    # -- adjacency of the level graphs -----------------------------------------

    def nbrs(self, r: int, v: int):
        """Neighbours of ``v`` in ``G^r`` (``G^0`` is the whole graph)."""
        if r == 0:
            return self.graph.adj[v]
        if r == self.R:
            return self.engine.adj.get(v, _EMPTY)
        return self.lg[r][v]

    def low_set(self, r: int) -> list[int]:
        """Sorted vertex set of ``L^r``."""
        if r == 0:
            return list(range(self.n))
        lvl = self.lvl
        return [v for v in range(self.n) if lvl[v] > r]

    # -- rebuilds -------------------------------------------------------------------

    def _resample(self, r: int) -> None:
        ht = self.ht
        ht &= (1 << (r - 1)) - 1
        for lev in range(r, self.R + 1):
            coins = self.rng.random(self.n) < self.params.p[lev - 1]
            ht |= coins.astype(np.int64) << (lev - 1)
        low = ht & -ht
        lo = np.zeros(self.n, dtype=np.int64)
        nz = low > 0
        lo[nz] = np.log2(low[nz]).astype(np.int64) + 1
        self.lo = lo.tolist()
        self.htl = ht.tolist()

    def level_preprocess(self, r: int) -> None:
        """Rebuild levels ``r..R`` from the current graph and the live ``L^{r-1}``."""
        n = self.n
        R = self.R
        meter = self.meter
        lvl = self.lvl
        member = self.member
        in_m = self.in_m
        is_h = self.is_h
        cand = self.low_set(r - 1)
        for v in cand:
            member[v] = 0
            in_m[v] = 0
        meter.work_units += len(cand)
        self._resample(r)
        lev = r
        while lev <= R:
            if not self._build_level(lev, cand):
                # degree cap violated at rebuild: resample this level and below
                meter.end_level_phase(lev, Cause.TL)
                for v in cand:
                    member[v] = 0
                    in_m[v] = 0
                    is_h[v] = 0
                self._resample(lev)
                continue
            cand = [v for v in cand if lvl[v] > lev]
            lev += 1

    def _build_level(self, r: int, cand: list[int]) -> bool:
        """Classify ``cand`` (= sorted ``L^{r-1}``) at level ``r``; False on a cap violation."""
        n = self.n
        R = self.R
        lvl = self.lvl
        is_h = self.is_h
        in_m = self.in_m
        member = self.member
        bit = 1 << (r - 1)
        ht = self.htl
        up = self.nbrs
        work = len(cand)
        hs = []
        for v in cand:
            if ht[v] & bit:
                hs.append(v)
                lvl[v] = r
                is_h[v] = 1
            else:
                lvl[v] = R + 1
                is_h[v] = 0
        prev = r - 1
        adj_prev = {v: up(prev, v) for v in hs}
        chosen = greedy_on(hs, adj_prev, n)
        mc = [0] * n
        for x in chosen:
            in_m[x] = 1
            member[x] = 1
            nb = adj_prev[x]
            work += len(nb) + 1
            for w in nb:
                mc[w] += 1
                if not is_h[w]:
                    lvl[w] = r
        for v in hs:
            work += len(adj_prev[v])
        self.mc[r] = mc
        # vertices still at R + 1 are in L^r
        new = {}
        cap = self.params.delta[r - 1]
        over = False
        for v in cand:
            if lvl[v] > r:
                nb = up(prev, v)
                work += len(nb) + 1
                s = {w for w in nb if lvl[w] > r}
                if len(s) > cap:
                    over = True
                new[v] = s
        self.meter.work_units += work
        self.age[r] = 0
        self.touched[r] = 0
        if r < R:
            self.lg[r] = new
        else:
            active = bytearray(n)
            for v in new:
                active[v] = 1
            self.engine.reset(active, {v: s for v, s in new.items() if s})
        deg = max((len(s) for s in new.values()), default=0)
        self.meter.note_degree(deg)
        return not over

    # -- updates ------------------------------------------------------------------

    def _end_levels(self, r: int, cause: Cause) -> None:
        meter = self.meter
        meter.end_level_phase(r, cause)
        meter.phase_lengths.append(self.age[r])
        for lev in range(r + 1, self.R + 1):
            meter.end_level_phase(lev, Cause.PARENT)
        self.level_preprocess(r)

    def update(self, ev: UpdateEvent) -> None:
        kind, u, v = ev
        g = self.graph
        R = self.R
        params = self.params
        meter = self.meter
        g.apply(ev)
        meter.updates += 1
        meter.work_units += 1
        lo_u, lo_v = self.lo[u], self.lo[v]
        # earliest level whose phase this update ends through the samples
        stop = R + 1
        cause = None
        if lo_u and lo_v:
            stop = max(lo_u, lo_v)
            cause = Cause.TH
        touched = self.touched
        cap = params.touch_cap
        for r in range(1, stop):
            inc = (0 < lo_u <= r) + (0 < lo_v <= r)
            if inc and touched[r] + inc >= cap[r - 1]:
                stop = r
                cause = Cause.TI
                break
        for r in range(1, stop):
            touched[r] += (0 < lo_u <= r) + (0 < lo_v <= r)
        tl = self._process(kind, u, v, stop)
        if tl:
            stop, cause = tl, Cause.TL
        age = self.age
        T = params.T
        for r in range(1, stop):
            age[r] += 1
            if age[r] >= T[r - 1]:
                stop, cause = r, Cause.TEXP
                break
        if cause is not None:
            self._end_levels(stop, cause)

    def _process(self, kind: int, u: int, v: int, stop: int) -> int:
        """Run the update through levels ``1..stop-1``; return a TL level or 0."""
        R = self.R
        lvl = self.lvl
        in_m = self.in_m
        is_h = self.is_h
        meter = self.meter
        delta = self.params.delta
        for r in range(1, stop):
            # an endpoint in M^r changes the other endpoint's count at this level
            x = y = -1
            if in_m[u] and lvl[u] == r:
                x, y = u, v
            elif in_m[v] and lvl[v] == r:
                x, y = v, u
            if x >= 0 and lvl[y] >= r and not (is_h[y] and lvl[y] == r):
                mc = self.mc[r]
                meter.work_units += 1
                if kind:
                    mc[y] += 1
                    if lvl[y] > r:
                        self._leave(y, r, stop)
                    return 0
                mc[y] -= 1
                if mc[y] == 0:
                    return self._descend(y, r, stop)
                return 0
            if lvl[u] > r and lvl[v] > r:
                meter.work_units += 1
                if r == R:
                    eng = self.engine
                    if kind:
                        eng.insert_edge(u, v)
                        d = max(len(eng.adj[u]), len(eng.adj[v]))
                        meter.note_degree(d)
                        if d > delta[r - 1]:
                            return r
                    else:
                        eng.delete_edge(u, v)
                else:
                    lg = self.lg[r]
                    if kind:
                        a, b = lg[u], lg[v]
                        a.add(v)
                        b.add(u)
                        d = max(len(a), len(b))
                        meter.note_degree(d)
                        if d > delta[r - 1]:
                            return r
                    else:
                        lg[u].discard(v)
                        lg[v].discard(u)
            else:
                return 0
        return 0

    def _leave(self, y: int, r: int, stop: int) -> None:
        """``y`` gained an M^r neighbour: drop it from ``G^r`` and everything below."""
        R = self.R
        lvl = self.lvl
        work = 0
        last = min(lvl[y] - 1, stop - 1, R)
        for lev in range(r, last + 1):
            if lev == R:
                self.engine.deactivate(y)
            else:
                lg = self.lg[lev]
                nb = lg.pop(y)
                work += len(nb) + 1
                for w in nb:
                    lg[w].discard(y)
        # y may still carry sampled-set flags from a level that is about to be rebuilt
        lvl[y] = r
        self.is_h[y] = 0
        self.in_m[y] = 0
        self.member[y] = 0
        self.meter.work_units += work

    def _descend(self, y: int, r: int, stop: int) -> int:
        """``y`` lost its last M^r neighbour: insert it into ``G^r`` and classify it below."""
        R = self.R
        lvl = self.lvl
        delta = self.params.delta
        meter = self.meter
        s = self.nbrs(r - 1, y)
        lev = r
        while True:
            meter.work_units += len(s) + 1
            s = {w for w in s if lvl[w] > lev}
            lvl[y] = lev + 1
            if lev == R:
                eng = self.engine
                eng.activate(y, s)
                adj = eng.adj
            else:
                lg = self.lg[lev]
                for w in s:
                    lg[w].add(y)
                lg[y] = s
                adj = lg
            d = len(s)
            for w in s:
                dw = len(adj[w])
                if dw > d:
                    d = dw
            meter.note_degree(d)
            if d > delta[lev - 1]:
                return lev
            lev += 1
            if lev > R or lev >= stop:
                return 0
            assert not (self.htl[y] >> (lev - 1)) & 1, f"vertex {y} entered L^{lev - 1} while sampled at level {lev}"
            # classify at the next level by the M^lev members among its G^{lev-1} neighbours
            in_m = self.in_m
            c = 0
            for w in s:
                if in_m[w] and lvl[w] == lev:
                    c += 1
            self.mc[lev][y] = c
            if c:
                lvl[y] = lev
                return 0

    # -- queries ----------------------------------------------------------------------

    def current_mis(self) -> set[int]:
        return set(np.flatnonzero(np.frombuffer(self.member, dtype=np.uint8)).tolist())

    def finish(self) -> None:
        pass

    def audit(self) -> None:
        """Recompute every level from scratch and compare; raises AssertionError."""
        g = self.graph
        n = self.n
        R = self.R
        lvl = self.lvl
        prev = set(range(n))
        for r in range(1, R + 1):
            bit = 1 << (r - 1)
            h = {v for v in prev if lvl[v] == r and self.is_h[v]}
            sampled = {v for v in prev if self.htl[v] & bit}
            assert h == sampled, f"level {r}: H differs from the sample restricted to L^{r - 1}"
            m = {v for v in h if self.in_m[v]}
            assert m == greedy_mis(g, h), f"level {r}: M is not the greedy MIS of G[H]"
            low = {v for v in prev if lvl[v] > r}
            for v in prev:
                c = sum(1 for w in g.adj[v] if w in m)
                if v not in h:
                    assert c == self.mc[r][v], f"level {r}: count of {v} is {self.mc[r][v]}, recount {c}"
                    assert (lvl[v] == r) == (c > 0), f"level {r}: vertex {v} misclassified"
            cap = self.params.delta[r - 1]
            for v in low:
                want = {w for w in g.adj[v] if w in low}
                got = set(self.nbrs(r, v))
                assert got == want, f"level {r}: stored neighbourhood of {v} is stale"
                assert len(got) <= cap, f"level {r}: degree {len(got)} of {v} over cap {cap}"
            if r < R:
                assert set(self.lg[r]) == low, f"level {r}: stored vertex set differs from L^{r}"
            else:
                active = {v for v in range(n) if self.engine.active[v]}
                assert active == low, "engine vertex set differs from the deepest low set"
            assert self.touched[r] < self.params.touch_cap[r - 1], f"level {r}: touch budget exceeded"
            prev = low
        self.engine.audit(g)
        assert verify_mis(g, self.current_mis()), "combined set is not an MIS"


def sqrtn_run(n: int, updates: Iterable[UpdateEvent], seed: int = 0,
              params: Optional[LevelParams] = None) -> tuple[set[int], WorkMeter]:
    algo = SqrtNMis(n, seed=seed, params=params)
    for ev in updates:
        algo.update(ev)
    return algo.current_mis(), algo.meter
