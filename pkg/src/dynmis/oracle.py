"""Static greedy MIS, the MIS verification oracle, and an incremental checker.

``greedy_mis`` is the lexicographically-first greedy construction used by every
phase rebuild. ``brute_force_lex_mis`` recomputes the same set by a deliberately
naive route so the two can be cross-checked. ``MisChecker`` keeps a verdict
current under edge updates and membership flips, reading only the graph and the
reported set, never an algorithm's internals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .graph import DynamicGraph, UpdateEvent, as_mask

BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True)
class Valid:
    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class NotIndependent:
    u: int
    v: int

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class NotMaximal:
    v: int

    def __bool__(self) -> bool:
        return False


Verdict = Union[Valid, NotIndependent, NotMaximal]
VALID = Valid()


def greedy_mis(g: DynamicGraph, mask=None) -> set[int]:
    """Lexicographically-first MIS of ``g`` restricted to ``mask``.

    The induced subgraph is never materialised; neighbour checks go through the
    mask flags.
    """
    n = g.n
    allowed = as_mask(n, mask)
    blocked = bytearray(n)
    adj = g.adj
    out: set[int] = set()
    for v in range(n):
        if allowed[v] and not blocked[v]:
            out.add(v)
            for w in adj[v]:
                blocked[w] = 1
    return out


def greedy_on(order: Iterable[int], adj, n: int) -> list[int]:
    """Greedy MIS over ``order`` (already sorted) using adjacency ``adj``.

    ``adj`` maps each vertex in ``order`` to neighbours; neighbours outside the
    order are harmless because they are never picked. Returns the chosen
    vertices in order. Used by phase rebuilds on their own level graphs.
    """
    blocked = bytearray(n)
    chosen = []
    for v in order:
        if not blocked[v]:
            chosen.append(v)
            for w in adj[v]:
                blocked[w] = 1
    return chosen


def verify_mis(g: DynamicGraph, s: Iterable[int], mask=None) -> Verdict:
    """Check that ``s`` is a maximal independent set of ``g[mask]``.

    Witnesses are the smallest offending pair / vertex in id order.
    """
    n = g.n
    allowed = as_mask(n, mask)
    inset = bytearray(n)
    for v in s:
        if not allowed[v]:
            raise ValueError(f"vertex {v} is in the set but outside the mask")
        inset[v] = 1
    adj = g.adj
    for u in range(n):
        if inset[u]:
            for w in sorted(adj[u]):
                if w > u and inset[w]:
                    return NotIndependent(u, w)
    for v in range(n):
        if allowed[v] and not inset[v]:
            if not any(inset[w] for w in adj[v] if allowed[w]):
                return NotMaximal(v)
    return VALID


def brute_force_lex_mis(g: DynamicGraph) -> set[int]:
    """Lexicographically-first MIS by direct rescans over an edge set.

    For each vertex in id order, every already-chosen lower vertex is rescanned
    against a frozen edge list; no blocking flags are kept.
    """
    if g.n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force oracle limited to n <= {BRUTE_FORCE_LIMIT}, got {g.n}")
    edges = frozenset(frozenset(e) for e in g.edges())
    members: list[int] = []
    for v in range(g.n):
        if all(frozenset((u, v)) not in edges for u in members):
            members.append(v)
    return set(members)


class MisChecker:
    """Incrementally maintained MIS verdict for a whole graph.

    Tracks, for every vertex, how many neighbours are in the reported set,
    the number of edges inside the set, and the number of uncovered
    non-members. ``sync`` diffs the reported membership flags against the last
    seen copy, so the cost per call is proportional to what actually changed.
    """

    def __init__(self, g: DynamicGraph):
        self.g = g
        n = g.n
        self.cnt = [0] * n
        self.seen = bytearray(n)
        self._seen_view = np.frombuffer(self.seen, dtype=np.uint8)
        self.conflicts = 0
        self.uncovered = n

    def edge(self, ev: UpdateEvent) -> None:
        """Account for an edge change already applied to the graph."""
        kind, u, v = ev
        seen = self.seen
        su, sv = seen[u], seen[v]
        d = 1 if kind else -1
        if su and sv:
            self.conflicts += d
        if sv:
            self._bump(u, su, d)
        if su:
            self._bump(v, sv, d)

    def _bump(self, x: int, sx, d: int) -> None:
        cnt = self.cnt
        before = cnt[x]
        cnt[x] = before + d
        if not sx:
            if before == 0:
                self.uncovered -= 1
            elif cnt[x] == 0:
                self.uncovered += 1

    def sync(self, member) -> None:
        cur = np.frombuffer(member, dtype=np.uint8)
        changed = np.flatnonzero(cur != self._seen_view)
        if not len(changed):
            return
        adj = self.g.adj
        cnt = self.cnt
        seen = self.seen
        for x in changed.tolist():
            if member[x]:
                # x joins
                if cnt[x] == 0:
                    self.uncovered -= 1
                self.conflicts += cnt[x]
                seen[x] = 1
                for y in adj[x]:
                    self._bump(y, seen[y], 1)
            else:
                seen[x] = 0
                self.conflicts -= cnt[x]
                if cnt[x] == 0:
                    self.uncovered += 1
                for y in adj[x]:
                    self._bump(y, seen[y], -1)

    @property
    def ok(self) -> bool:
        return self.conflicts == 0 and self.uncovered == 0

    def members(self) -> set[int]:
        return set(np.flatnonzero(self._seen_view).tolist())
