"""Single-level sample-and-prune dynamic MIS with O~(n^{2/3}) amortized work.

A phase samples a vertex set ``H`` with probability ``p``, freezes the greedy
MIS ``M_H`` of ``G[H]`` and splits the rest of the graph into ``I`` (some
neighbour in ``M_H``) and ``L`` (none). The counter engine maintains an MIS of
``G[L]``; the answer is ``M_H`` plus that MIS. A phase ends when an update lands
inside ``H``, when too many vertices have moved from ``I`` to ``L``, when the
degree of ``G[L]`` exceeds its cap, or after ``T`` updates. Every end triggers a
rebuild from the current graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .det import DetMis
from .graph import DynamicGraph, UpdateEvent
from .meter import Cause, WorkMeter
from .oracle import greedy_mis, verify_mis
from .rng import make_rng

# vertex classes within a phase
H, I, L = 0, 1, 2


@dataclass(frozen=True)
class PhaseParams:
    p: float
    T: int
    delta_cap: float
    i_move_cap: int

    def __post_init__(self):
        if not 0 < self.p <= 1:
            raise ValueError(f"sampling probability must be in (0, 1], got {self.p}")
        if self.T < 1 or self.delta_cap <= 0 or self.i_move_cap < 1:
            raise ValueError(f"degenerate phase parameters {self}")

    @classmethod
    def from_probability(cls, p: float, n: int) -> "PhaseParams":
        """Thresholds derived from ``p``: length 1/(6p^2), degree cap 5 ln(n)/p, 2/p moves."""
        return cls(
            p=p,
            T=max(1, math.floor(1.0 / (6.0 * p * p))),
            delta_cap=5.0 / p * max(math.log(n), 1.0),
            i_move_cap=max(1, math.ceil(2.0 / p)),
        )

    @classmethod
    def for_n(cls, n: int) -> "PhaseParams":
        p = max(math.log(n), 1.0) ** (1 / 3) / n ** (2 / 3)
        return cls.from_probability(min(p, 1.0), n)


def sample_flags(n: int, p: float, rng: np.random.Generator) -> bytearray:
    """One independent coin per vertex; flags set with probability ``p``."""
    return bytearray((rng.random(n) < p).astype(np.uint8).tobytes())


def preprocess(g: DynamicGraph, p: float, rng: np.random.Generator,
               meter: Optional[WorkMeter] = None) -> tuple[set[int], set[int]]:
    """Sample ``H`` with probability ``p`` and return ``(H, greedy MIS of G[H])``."""
    if not 0 <= p <= 1:
        raise ValueError(f"sampling probability must be in [0, 1], got {p}")
    flags = sample_flags(g.n, p, rng)
    h = set(np.flatnonzero(np.frombuffer(flags, dtype=np.uint8)).tolist())
    mis = greedy_mis(g, flags)
    if meter is not None:
        meter.work_units += g.n + 2 * g.m
    return h, mis


class WarmupMis:
    """Phase-restart dynamic MIS; ``update`` applies the edge to ``graph`` itself."""

    name = "WarmupN23"

    def __init__(self, n: int, seed: int = 0, params: Optional[PhaseParams] = None,
                 meter: Optional[WorkMeter] = None, graph: Optional[DynamicGraph] = None):
        self.graph = graph if graph is not None else DynamicGraph(n)
        self.n = self.graph.n
        self.params = params if params is not None else PhaseParams.for_n(self.n)
        self.meter = meter if meter is not None else WorkMeter()
        self.rng = make_rng(seed, "warmup")
        self.member = bytearray(self.n)
        self.engine = DetMis(self.n, member=self.member, meter=self.meter)
        self.start_phase()

    # -- phase construction ---------------------------------------------------

    def start_phase(self) -> None:
        """Rebuild the phase from the current graph, resampling until the degree cap holds."""
        while True:
            self._build()
            d = self.engine.max_degree()
            self.meter.note_degree(d)
            if d <= self.params.delta_cap:
                return
            self.meter.end_phase(Cause.TL, 0)

    def _build(self) -> None:
        g = self.graph
        n = self.n
        label = bytearray(b"\x02") * n
        hflags = sample_flags(n, self.params.p, self.rng)
        h_list = np.flatnonzero(np.frombuffer(hflags, dtype=np.uint8)).tolist()
        for v in h_list:
            label[v] = H
        self._finish_build(label, h_list, g.nonisolated)
        self.meter.work_units += n

    def _finish_build(self, label: bytearray, h_list: list[int], nonisolated: Iterable[int]) -> None:
        """Shared tail of a rebuild once ``H`` is labelled: M_H, I/L split, low engine."""
        n = self.n
        adj = self.graph.adj
        work = 0
        member = self.member
        member[:] = bytes(n)
        in_mh = bytearray(n)
        mhc = [0] * n
        blocked = bytearray(n)
        # H and I together are small; filtering adjacency against them runs in C
        high = set(h_list)
        for x in h_list:
            if blocked[x]:
                continue
            in_mh[x] = 1
            member[x] = 1
            nb = adj[x]
            work += len(nb) + 1
            for w in nb:
                blocked[w] = 1
                mhc[w] += 1
                if label[w] == L:
                    label[w] = I
                    high.add(w)
        lab = np.frombuffer(label, dtype=np.uint8)
        cand = np.fromiter(nonisolated, dtype=np.int64)
        lows = cand[lab[cand] == L].tolist()
        if high:
            ladj = {v: s for v in lows if (s := adj[v] - high)}
        else:
            ladj = {v: set(adj[v]) for v in lows}
        work += sum(map(len, map(adj.__getitem__, lows)))
        active = bytearray((lab == L).astype(np.uint8).tobytes())
        self.label = label
        self.in_mh = in_mh
        self.mhc = mhc
        self.moves = 0
        self.age = 0
        self.meter.work_units += work
        self.engine.reset(active, ladj)

    # -- updates ----------------------------------------------------------------

    def _low_neighbors(self, v: int) -> list[int]:
        nb = self.graph.adj[v]
        self.meter.work_units += len(nb)
        label = self.label
        return [w for w in nb if label[w] == L]

    def _moved(self, v: int, into_low: bool) -> None:
        """Hook for structures that track the low set (none at this level)."""

    def step(self, ev: UpdateEvent) -> Optional[Cause]:
        """Apply ``ev`` to the graph and process it; return the phase end cause, if any."""
        kind, u, v = ev
        label = self.label
        lu, lv = label[u], label[v]
        g = self.graph
        g.apply(ev)
        self.age += 1
        meter = self.meter
        meter.work_units += 1
        if lu == H and lv == H:
            return Cause.TH
        eng = self.engine
        cap = self.params.delta_cap
        over = False
        if lu == L and lv == L:
            if kind:
                eng.insert_edge(u, v)
                d = max(len(eng.adj[u]), len(eng.adj[v]))
                meter.note_degree(d)
                over = d > cap
            else:
                eng.delete_edge(u, v)
        elif lu == H or lv == H:
            if lv == H:
                u, v, lu, lv = v, u, lv, lu
            if self.in_mh[u] and lv != H:
                mhc = self.mhc
                if kind:
                    mhc[v] += 1
                    if lv == L:
                        # L -> I: v gains its first M_H neighbour
                        label[v] = I
                        eng.deactivate(v)
                        self._moved(v, False)
                else:
                    mhc[v] -= 1
                    if mhc[v] == 0:
                        # I -> L: v lost its last M_H neighbour
                        nbrs = self._low_neighbors(v)
                        label[v] = L
                        eng.activate(v, nbrs)
                        self._moved(v, True)
                        self.moves += 1
                        adj = eng.adj
                        d = len(nbrs)
                        for w in nbrs:
                            dw = len(adj[w])
                            if dw > d:
                                d = dw
                        meter.note_degree(d)
                        over = d > cap
        self._edge_hook(kind, u, v)
        if self.moves >= self.params.i_move_cap:
            return Cause.TI
        if over:
            return Cause.TL
        if self.age >= self.params.T:
            return Cause.TEXP
        return None

    def _edge_hook(self, kind, u: int, v: int) -> None:
        """Per-update hook after processing (unused at this level)."""

    def update(self, ev: UpdateEvent) -> None:
        cause = self.step(ev)
        self.meter.updates += 1
        if cause is not None:
            self.meter.end_phase(cause, self.age)
            self.start_phase()

    # -- queries ----------------------------------------------------------------

    def current_mis(self) -> set[int]:
        return set(np.flatnonzero(np.frombuffer(self.member, dtype=np.uint8)).tolist())

    def mis_h(self) -> set[int]:
        return set(np.flatnonzero(np.frombuffer(self.in_mh, dtype=np.uint8)).tolist())

    def finish(self) -> None:
        pass

    def audit(self) -> None:
        """Recompute the partition from scratch and compare; raises AssertionError."""
        g = self.graph
        n = self.n
        label = self.label
        hset = {v for v in range(n) if label[v] == H}
        mh = self.mis_h()
        assert mh <= hset, "M_H escapes H"
        assert mh == greedy_mis(g, hset), "M_H is not the greedy MIS of G[H]"
        for v in range(n):
            c = sum(1 for w in g.adj[v] if w in mh)
            assert c == self.mhc[v], f"M_H counter of {v} is {self.mhc[v]}, recount {c}"
            want = H if v in hset else (I if c else L)
            assert label[v] == want, f"vertex {v} labelled {label[v]}, expected {want}"
            assert bool(self.engine.active[v]) == (want == L), f"engine activity of {v}"
        self.engine.audit(g)
        assert self.engine.max_degree() <= self.params.delta_cap, "low-graph degree cap exceeded"
        assert self.moves < self.params.i_move_cap, "I->L move budget exceeded in a live phase"
        assert verify_mis(g, self.current_mis()), "combined set is not an MIS"


def warmup_run(n: int, updates: Iterable[UpdateEvent], seed: int = 0,
               params: Optional[PhaseParams] = None) -> tuple[set[int], WorkMeter]:
    algo = WarmupMis(n, seed=seed, params=params)
    for ev in updates:
        algo.update(ev)
    return algo.current_mis(), algo.meter
