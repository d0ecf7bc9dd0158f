"""Deterministic counter-based dynamic MIS on an explicitly stored induced subgraph.

Every active vertex keeps the number of its active neighbours that are in the
MIS. A vertex is in the MIS exactly when that counter is zero. The engine owns
the adjacency of its active subgraph (a dict of sets keyed by vertex), so the
randomized algorithms can hand it the low-degree part of the graph and grow or
shrink it one vertex at a time.

Work units: one per counter read/write and per adjacency step.
"""

from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from .graph import DynamicGraph, UpdateEvent, as_mask
from .meter import WorkMeter
from .oracle import greedy_on


class DetMis:
    """Counter engine over an induced subgraph of a fixed vertex universe.

    ``member`` may be shared with an enclosing algorithm: the engine only ever
    writes the flags of its own active vertices.
    """

    def __init__(self, n: int, member: Optional[bytearray] = None,
                 meter: Optional[WorkMeter] = None):
        self.n = n
        self.member = member if member is not None else bytearray(n)
        self.meter = meter if meter is not None else WorkMeter()
        self.active = bytearray(n)
        self.adj: dict[int, set[int]] = {}
        self.count = [0] * n

    # -- construction -------------------------------------------------------

    @classmethod
    def from_graph(cls, g: DynamicGraph, active=None, meter: Optional[WorkMeter] = None,
                   member: Optional[bytearray] = None) -> "DetMis":
        """Engine over ``g[active]``, MIS initialised to the greedy MIS."""
        eng = cls(g.n, member=member, meter=meter)
        flags = as_mask(g.n, active)
        adj = {}
        work = 0
        for v in range(g.n):
            if flags[v]:
                nb = g.adj[v]
                work += len(nb) + 1
                if nb:
                    adj[v] = {w for w in nb if flags[w]}
        eng.meter.work_units += work
        eng.reset(flags, adj)
        return eng

    def reset(self, active: bytearray, adj: dict[int, set[int]]) -> None:
        """Rebuild from an active-flag vector and the active subgraph's adjacency.

        Active vertices absent from ``adj`` are isolated. Ownership of ``adj``
        passes to the engine. The MIS becomes the greedy MIS of the subgraph.
        """
        n = self.n
        self.active = active
        self.adj = adj
        count = [0] * n
        self.count = count
        member = self.member
        mv = np.frombuffer(member, dtype=np.uint8)
        av = np.frombuffer(active, dtype=np.uint8)
        # isolated active vertices are trivially in; others are decided below
        np.bitwise_or(mv, av, out=mv)
        for v in [v for v, nb in adj.items() if not nb]:
            del adj[v]
        order = sorted(adj)
        mv[order] = 0
        chosen = greedy_on(order, adj, n)
        work = len(order)
        for v in chosen:
            member[v] = 1
        for v in chosen:
            nb = adj[v]
            work += len(nb)
            for w in nb:
                count[w] += 1
        self.meter.work_units += work

    # -- queries ------------------------------------------------------------

    def is_active(self, v: int) -> bool:
        return bool(self.active[v])

    def neighbors(self, v: int) -> set[int]:
        return self.adj.get(v, _EMPTY)

    def degree(self, v: int) -> int:
        nb = self.adj.get(v)
        return len(nb) if nb else 0

    def max_degree(self) -> int:
        return max(map(len, self.adj.values()), default=0)

    def mis(self) -> set[int]:
        member = self.member
        active = self.active
        return {v for v in np.flatnonzero(np.frombuffer(active, dtype=np.uint8)).tolist()
                if member[v]}

    # -- edge updates -------------------------------------------------------

    def edge_update(self, ev: UpdateEvent) -> None:
        """Apply an edge update between active endpoints (no-op otherwise)."""
        kind, u, v = ev
        if not (self.active[u] and self.active[v]):
            return
        if kind:
            self.insert_edge(u, v)
        else:
            self.delete_edge(u, v)

    def insert_edge(self, u: int, v: int) -> None:
        adj = self.adj
        nb = adj.get(u)
        if nb is None:
            adj[u] = {v}
        else:
            nb.add(v)
        nb = adj.get(v)
        if nb is None:
            adj[v] = {u}
        else:
            nb.add(u)
        member = self.member
        count = self.count
        mu, mv = member[u], member[v]
        if mu and mv:
            # tie-break: the larger id leaves
            winner, loser = (u, v) if u < v else (v, u)
            self._leave(loser, skip=winner)
            count[loser] += 1
        elif mu:
            count[v] += 1
        elif mv:
            count[u] += 1
        self.meter.work_units += 2

    def delete_edge(self, u: int, v: int) -> None:
        adj = self.adj
        adj[u].discard(v)
        adj[v].discard(u)
        member = self.member
        count = self.count
        self.meter.work_units += 2
        if member[u]:
            count[v] -= 1
            if count[v] == 0:
                self._join(v)
        elif member[v]:
            count[u] -= 1
            if count[u] == 0:
                self._join(u)

    # -- vertex updates -----------------------------------------------------

    def activate(self, v: int, neighbors: Iterable[int]) -> None:
        """Add ``v`` with edges to ``neighbors`` (its active neighbours)."""
        nbrs = set(neighbors)
        adj = self.adj
        self.active[v] = 1
        member = self.member
        c = 0
        for w in nbrs:
            nb = adj.get(w)
            if nb is None:
                adj[w] = {v}
            else:
                nb.add(v)
            if member[w]:
                c += 1
        if nbrs:
            adj[v] = nbrs
        self.count[v] = c
        self.meter.work_units += len(nbrs) + 1
        member[v] = 0
        if c == 0:
            self._join(v)

    def deactivate(self, v: int) -> None:
        """Remove ``v`` and its incident edges; cascade if it was in the MIS."""
        adj = self.adj
        nbrs = adj.pop(v, _EMPTY)
        for w in nbrs:
            adj[w].discard(v)
        self.meter.work_units += len(nbrs) + 1
        self.active[v] = 0
        self.count[v] = 0
        if self.member[v]:
            self.member[v] = 0
            self._release(nbrs)

    # -- cascade ------------------------------------------------------------

    def _join(self, v: int) -> None:
        self.member[v] = 1
        count = self.count
        nb = self.adj.get(v, _EMPTY)
        for w in nb:
            count[w] += 1
        self.meter.work_units += len(nb) + 1

    def _leave(self, v: int, skip: int) -> None:
        self.member[v] = 0
        nb = self.adj[v]
        self._release(w for w in nb if w != skip)

    def _release(self, nbrs) -> None:
        """Decrement counters of a departing member's neighbours; zeroes join in id order."""
        count = self.count
        zero = []
        steps = 0
        for w in nbrs:
            steps += 1
            count[w] -= 1
            if count[w] == 0:
                zero.append(w)
        self.meter.work_units += steps
        if zero:
            zero.sort()
            member = self.member
            for w in zero:
                if count[w] == 0 and not member[w]:
                    self._join(w)

    # -- debugging ------------------------------------------------------------

    def audit(self, g: Optional[DynamicGraph] = None) -> None:
        """Full recount of counters and adjacency; raises AssertionError on drift."""
        active = self.active
        member = self.member
        count = self.count
        for v, nb in self.adj.items():
            assert active[v], f"inactive vertex {v} has stored adjacency"
            for w in nb:
                assert active[w], f"edge ({v}, {w}) leaves the active set"
                assert v in self.adj.get(w, _EMPTY), f"asymmetric edge ({v}, {w})"
                if g is not None:
                    assert w in g.adj[v], f"stored edge ({v}, {w}) missing from graph"
        for v in np.flatnonzero(np.frombuffer(active, dtype=np.uint8)).tolist():
            nb = self.adj.get(v, _EMPTY)
            if g is not None:
                expect = {w for w in g.adj[v] if active[w]}
                assert nb == expect, f"stored neighbourhood of {v} differs from graph"
            c = sum(1 for w in nb if member[w])
            assert c == count[v], f"counter of {v} is {count[v]}, recount {c}"
            assert bool(member[v]) == (c == 0), f"membership of {v} disagrees with counter {c}"


_EMPTY: frozenset = frozenset()


class DetAlgorithm:
    """Standalone deterministic baseline: the counter engine over the whole graph."""

    name = "Det"

    def __init__(self, n: int, seed: int = 0, meter: Optional[WorkMeter] = None):
        self.graph = DynamicGraph(n)
        self.meter = meter if meter is not None else WorkMeter()
        self.engine = DetMis.from_graph(self.graph, None, meter=self.meter)
        self.member = self.engine.member

    def update(self, ev: UpdateEvent) -> None:
        self.graph.apply(ev)
        kind, u, v = ev
        if kind:
            self.engine.insert_edge(u, v)
            eng = self.engine
            self.meter.note_degree(max(eng.degree(u), eng.degree(v)))
        else:
            self.engine.delete_edge(u, v)

    def current_mis(self) -> set[int]:
        return self.engine.mis()

    def audit(self) -> None:
        self.engine.audit(self.graph)

    def finish(self) -> None:
        pass
