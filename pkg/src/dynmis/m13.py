"""Edge-count-parameterised variant with O~(m^{1/3}) amortized work.

Same phase scheme as the n^{2/3} algorithm, but every threshold comes from an
edge-count anchor fixed at the start of an epoch, and an epoch ends once the
live edge count leaves a factor-2 window around it. Rebuilds cost O(m) rather
than O(n): only non-isolated vertices flip a coin up front, and an isolated
vertex flips its coin on the first insertion that touches it. Vertices whose
phase-start degree is at least ``m^{2/3}`` keep an explicit list of their
low-set neighbours so that moving them never needs a full adjacency scan.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional

import numpy as np

from .det import DetMis
from .graph import DynamicGraph, UpdateEvent
from .meter import Cause, WorkMeter
from .rng import make_rng
from .warmup import H, L, PhaseParams, WarmupMis


def epoch_params(m_est: int) -> PhaseParams:
    """Thresholds for an epoch anchored at ``m_est`` edges."""
    c = m_est ** (1 / 3)
    return PhaseParams(
        p=1.0 / c,
        T=max(1, math.floor(m_est ** (2 / 3) / 6)),
        delta_cap=5.0 * c * max(math.log(m_est), 1.0),
        i_move_cap=max(1, math.ceil(c)),
    )


class M13Mis(WarmupMis):
    name = "M13"

    def __init__(self, n: int, seed: int = 0, meter: Optional[WorkMeter] = None,
                 graph: Optional[DynamicGraph] = None):
        self.graph = graph if graph is not None else DynamicGraph(n)
        self.n = self.graph.n
        self.meter = meter if meter is not None else WorkMeter()
        self.rng = make_rng(seed, "m13")
        self.member = bytearray(self.n)
        self.engine = DetMis(self.n, member=self.member, meter=self.meter)
        self.epochs = 0
        self.start_epoch()

    def start_epoch(self) -> None:
        self.epochs += 1
        m_est = max(1, self.graph.m)
        self.m_est = m_est
        self.params = epoch_params(m_est)
        self.high_threshold = m_est ** (2 / 3)
        self.low_degree_cap = 7 / 6 * m_est ** (2 / 3)
        self.start_phase()

    # -- phase construction ---------------------------------------------------

    def _build(self) -> None:
        g = self.graph
        n = self.n
        adj = g.adj
        nonisol = sorted(g.nonisolated)
        coins = self.rng.random(len(nonisol)) < self.params.p
        h_list = [nonisol[i] for i in np.flatnonzero(coins).tolist()]
        label = bytearray(b"\x02") * n
        for v in h_list:
            label[v] = H
        und = np.ones(n, dtype=np.uint8)
        und[nonisol] = 0
        self.undecided = bytearray(und.tobytes())
        self._finish_build(label, h_list, nonisol)
        thr = self.high_threshold
        if 2 * g.m >= thr:
            deg = np.fromiter(map(len, map(adj.__getitem__, nonisol)), dtype=np.int64, count=len(nonisol))
            vhigh = [nonisol[i] for i in np.flatnonzero(deg >= thr).tolist()]
        else:
            vhigh = []
        assert len(vhigh) <= 4 * self.m_est ** (1 / 3), f"{len(vhigh)} high-degree vertices"
        flags = bytearray(n)
        hl = {}
        work = len(nonisol)
        for h in vhigh:
            flags[h] = 1
            work += len(adj[h])
            hl[h] = {w for w in adj[h] if label[w] == L}
        self.vhigh = vhigh
        self.vhigh_flag = flags
        self.high_low = hl
        self.meter.work_units += work

    # -- updates ----------------------------------------------------------------

    def _draw(self, x: int) -> None:
        """First insertion on a vertex isolated at phase start: flip its deferred coin."""
        self.undecided[x] = 0
        self.meter.work_units += 1
        if self.rng.random() < self.params.p:
            # joins H; being isolated it is also in the greedy MIS of G[H]
            self.label[x] = H
            self.engine.deactivate(x)
            self.in_mh[x] = 1
            self.member[x] = 1
            self._moved(x, False)

    def _low_neighbors(self, v: int) -> list[int]:
        if self.vhigh_flag[v]:
            nb = self.high_low[v]
            self.meter.work_units += len(nb) + 1
            return list(nb)
        d = len(self.graph.adj[v])
        assert d <= self.low_degree_cap, f"low vertex {v} reached degree {d}"
        return super()._low_neighbors(v)

    def _moved(self, v: int, into_low: bool) -> None:
        # broadcast the move to every high-degree vertex
        vhigh = self.vhigh
        if not vhigh:
            return
        self.meter.work_units += len(vhigh)
        hl = self.high_low
        if into_low:
            nb = self.graph.adj[v]
            for h in vhigh:
                if h in nb:
                    hl[h].add(v)
        else:
            for h in vhigh:
                hl[h].discard(v)

    def _edge_hook(self, kind, u: int, v: int) -> None:
        flags = self.vhigh_flag
        if not (flags[u] or flags[v]):
            return
        label = self.label
        hl = self.high_low
        for a, b in ((u, v), (v, u)):
            if flags[a] and label[b] == L:
                if kind:
                    hl[a].add(b)
                else:
                    hl[a].discard(b)
        self.meter.work_units += 1

    def step(self, ev: UpdateEvent) -> Optional[Cause]:
        kind, u, v = ev
        if kind:
            und = self.undecided
            if und[u]:
                self._draw(u)
            if und[v]:
                self._draw(v)
        return super().step(ev)

    def update(self, ev: UpdateEvent) -> None:
        m_after = self.graph.m + (1 if ev.kind else -1)
        m_est = self.m_est
        if not (m_est / 2 < m_after < 2 * m_est):
            self.graph.apply(ev)
            self.meter.updates += 1
            self.meter.work_units += 1
            self.meter.end_phase(Cause.EPOCH, self.age + 1)
            self.start_epoch()
            return
        super().update(ev)

    # -- checks -------------------------------------------------------------------

    def audit(self) -> None:
        super().audit()
        g = self.graph
        m_est = self.m_est
        assert m_est / 2 < g.m < 2 * m_est or (g.m == 0 and m_est == 1), "epoch window violated"
        label = self.label
        for v in range(self.n):
            if self.undecided[v]:
                assert not g.adj[v] and label[v] == L, f"undecided vertex {v} is not an isolated low vertex"
        for h in self.vhigh:
            want = {w for w in g.adj[h] if label[w] == L}
            assert self.high_low[h] == want, f"low-neighbour list of {h} is stale"
        assert len(self.vhigh) <= 4 * m_est ** (1 / 3)
        for v in range(self.n):
            if not self.vhigh_flag[v]:
                assert len(g.adj[v]) <= self.low_degree_cap, f"low vertex {v} over its degree bound"


def m13_run(n: int, updates: Iterable[UpdateEvent], seed: int = 0) -> tuple[set[int], WorkMeter]:
    algo = M13Mis(n, seed=seed)
    for ev in updates:
        algo.update(ev)
    return algo.current_mis(), algo.meter
