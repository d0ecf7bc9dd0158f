"""Fixed-universe undirected dynamic graph and the edge update event."""

from __future__ import annotations

from enum import IntEnum
from typing import Callable, Iterable, NamedTuple, Optional


class GraphUpdateError(ValueError):
    """Raised for a malformed update: duplicate insert, phantom delete, bad vertex."""


class Kind(IntEnum):
    DELETE = 0
    INSERT = 1


class UpdateEvent(NamedTuple):
    kind: Kind
    u: int
    v: int

    @property
    def is_insert(self) -> bool:
        return self.kind == Kind.INSERT

    def __str__(self) -> str:
        return f"{'+' if self.kind else '-'} {self.u} {self.v}"


def _event(kind: Kind, u: int, v: int) -> UpdateEvent:
    if u == v:
        raise GraphUpdateError(f"self-loop on vertex {u}")
    if u > v:
        u, v = v, u
    return UpdateEvent(kind, u, v)


def insert(u: int, v: int) -> UpdateEvent:
    return _event(Kind.INSERT, u, v)


def delete(u: int, v: int) -> UpdateEvent:
    return _event(Kind.DELETE, u, v)


class DynamicGraph:
    """Undirected simple graph on vertices ``0..n-1``.

    Adjacency is a list of sets. ``nonisolated`` tracks vertices of positive
    degree so that linear-in-m passes never need to touch all ``n`` vertices.
    """

    __slots__ = ("n", "adj", "m", "nonisolated")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"graph needs at least one vertex, got n={n}")
        self.n = n
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.m = 0
        self.nonisolated: set[int] = set()

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "DynamicGraph":
        g = cls(n)
        for u, v in edges:
            g.apply(insert(u, v))
        return g

    def _check(self, u: int, v: int) -> None:
        n = self.n
        if not (0 <= u < n and 0 <= v < n):
            raise GraphUpdateError(f"edge ({u}, {v}) outside vertex range [0, {n})")
        if u == v:
            raise GraphUpdateError(f"self-loop on vertex {u}")

    def apply(self, ev: UpdateEvent) -> None:
        kind, u, v = ev
        self._check(u, v)
        adj = self.adj
        au, av = adj[u], adj[v]
        if kind:
            if v in au:
                raise GraphUpdateError(f"insert of existing edge ({u}, {v})")
            if not au:
                self.nonisolated.add(u)
            if not av:
                self.nonisolated.add(v)
            au.add(v)
            av.add(u)
            self.m += 1
        else:
            if v not in au:
                raise GraphUpdateError(f"delete of missing edge ({u}, {v})")
            au.discard(v)
            av.discard(u)
            if not au:
                self.nonisolated.discard(u)
            if not av:
                self.nonisolated.discard(v)
            self.m -= 1

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max(map(len, self.adj), default=0)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, w) for u in range(self.n) for w in self.adj[u] if u < w]

    def induced_degree(self, v: int, mask: Optional[Callable[[int], bool]] = None) -> int:
        """Number of neighbours of ``v`` satisfying ``mask`` (all if None)."""
        if mask is None:
            return len(self.adj[v])
        return sum(1 for w in self.adj[v] if mask(w))

    def copy(self) -> "DynamicGraph":
        g = DynamicGraph(self.n)
        g.adj = [set(a) for a in self.adj]
        g.m = self.m
        g.nonisolated = set(self.nonisolated)
        return g

    def __repr__(self) -> str:
        return f"DynamicGraph(n={self.n}, m={self.m})"


def as_mask(n: int, mask) -> bytearray:
    """Normalise a vertex predicate (None, callable, iterable of ids, or flags) to flags."""
    if mask is None:
        return bytearray(b"\x01") * n
    if isinstance(mask, (bytes, bytearray)):
        if len(mask) != n:
            raise ValueError("mask length does not match vertex count")
        return bytearray(mask)
    if callable(mask):
        return bytearray(1 if mask(v) else 0 for v in range(n))
    flags = bytearray(n)
    for v in mask:
        flags[v] = 1
    return flags
