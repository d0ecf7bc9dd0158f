"""Oblivious update sequences: generators, and the plain-text update file format.

A sequence depends only on its ``WorkloadSpec``; nothing an algorithm does can
influence it. Every generator tracks edge presence itself so inserts always hit
absent edges and deletes present ones.

File format: a header line ``n <N>`` then one ``+ u v`` / ``- u v`` line per
event with ``u < v``.
"""

from __future__ import annotations

import io
import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional, Union

import numpy as np

from .graph import Kind, UpdateEvent
from .rng import make_rng

FAMILIES = ("uniform", "er", "window", "hub", "clique")
_ALIASES = {
    "uniformtoggle": "uniform",
    "erbuildteardown": "er",
    "slidingwindow": "window",
    "hubattack": "hub",
    "cliquecycle": "clique",
}


class WorkloadFormatError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


def family_name(name: str) -> str:
    key = name.lower().replace("_", "").replace("-", "")
    key = _ALIASES.get(key, key)
    if key not in FAMILIES:
        raise ValueError(f"unknown workload family {name!r}; expected one of {', '.join(FAMILIES)}")
    return key


@dataclass(frozen=True)
class WorkloadSpec:
    family: str
    n: int
    k: int
    seed: int = 0
    p_edge: float = 0.5
    window: Optional[int] = None  # defaults to n
    hot_set_size: Optional[int] = None  # defaults to ceil(sqrt(n))
    hot_fraction: float = 0.5
    clique_size: int = 16

    def __post_init__(self):
        object.__setattr__(self, "family", family_name(self.family))
        if self.n < 2:
            raise ValueError(f"workloads need n >= 2, got {self.n}")
        if self.k < 0:
            raise ValueError(f"update count must be non-negative, got {self.k}")
        pairs = self.n * (self.n - 1) // 2
        if self.family == "er" and not 0 < self.p_edge <= 1:
            raise ValueError(f"edge probability must be in (0, 1], got {self.p_edge}")
        if self.family == "window" and not 1 <= self.effective_window <= pairs:
            raise ValueError(f"window {self.effective_window} infeasible: only {pairs} vertex pairs")
        if self.family == "hub":
            if not 1 <= self.effective_hot_set <= self.n:
                raise ValueError(f"hot set size {self.effective_hot_set} outside [1, {self.n}]")
            if not 0 <= self.hot_fraction <= 1:
                raise ValueError(f"hot fraction must be in [0, 1], got {self.hot_fraction}")
        if self.family == "clique" and self.clique_size < 2:
            raise ValueError(f"clique size must be at least 2, got {self.clique_size}")

    @property
    def effective_window(self) -> int:
        return self.window if self.window is not None else self.n

    @property
    def effective_hot_set(self) -> int:
        return self.hot_set_size if self.hot_set_size is not None else math.isqrt(self.n - 1) + 1


class _Uniforms:
    """Buffered triples of uniform [0, 1) floats; draws in blocks to amortize numpy calls."""

    def __init__(self, rng, block: int = 4096):
        self.rng = rng
        self.block = block
        self.buf: list = []

    def triple(self) -> tuple[float, float, float]:
        if not self.buf:
            self.buf = self.rng.random((self.block, 3)).tolist()
            self.buf.reverse()
        return self.buf.pop()


def _uniform_pair(draw: _Uniforms, n: int) -> tuple[int, int]:
    while True:
        a, b, _ = draw.triple()
        u, v = int(a * n), int(b * n)
        if u != v:
            return (u, v) if u < v else (v, u)


def _toggle(present: set, u: int, v: int) -> UpdateEvent:
    e = (u, v)
    if e in present:
        present.remove(e)
        return UpdateEvent(Kind.DELETE, u, v)
    present.add(e)
    return UpdateEvent(Kind.INSERT, u, v)


def _gen_uniform(spec: WorkloadSpec, rng) -> Iterator[UpdateEvent]:
    draw = _Uniforms(rng)
    present: set = set()
    for _ in range(spec.k):
        u, v = _uniform_pair(draw, spec.n)
        yield _toggle(present, u, v)


def _gen_hub(spec: WorkloadSpec, rng) -> Iterator[UpdateEvent]:
    n = spec.n
    hot = sorted(rng.choice(n, size=spec.effective_hot_set, replace=False).tolist())
    draw = _Uniforms(rng)
    present: set = set()
    frac = spec.hot_fraction
    for _ in range(spec.k):
        while True:
            a, b, c = draw.triple()
            if c < frac:
                u = hot[int(a * len(hot))]
            else:
                u = int(a * n)
            v = int(b * n)
            if u != v:
                break
        if u > v:
            u, v = v, u
        yield _toggle(present, u, v)


def _gen_window(spec: WorkloadSpec, rng) -> Iterator[UpdateEvent]:
    n = spec.n
    window = spec.effective_window
    draw = _Uniforms(rng)
    present: set = set()
    fifo: deque = deque()
    for _ in range(spec.k):
        if len(fifo) >= window:
            u, v = fifo.popleft()
            present.remove((u, v))
            yield UpdateEvent(Kind.DELETE, u, v)
            continue
        while True:
            e = _uniform_pair(draw, n)
            if e not in present:
                break
        present.add(e)
        fifo.append(e)
        yield UpdateEvent(Kind.INSERT, *e)


def _gen_er(spec: WorkloadSpec, rng) -> Iterator[UpdateEvent]:
    n = spec.n
    remaining = spec.k
    iu, iv = _upper_pairs(n)
    while remaining > 0:
        keep = rng.random(len(iu)) < spec.p_edge
        idx = rng.permutation(int(keep.sum()))
        eu, ev = iu[keep][idx].tolist(), iv[keep][idx].tolist()
        if not eu:
            # an empty sample still has to make progress
            u, v = _uniform_pair(_Uniforms(rng, block=64), n)
            eu, ev = [u], [v]
        b = min(len(eu), remaining // 2) if remaining > 1 else 1
        for i in range(b):
            yield UpdateEvent(Kind.INSERT, eu[i], ev[i])
        remaining -= b
        order = rng.permutation(b).tolist()
        for i in order:
            if remaining == 0:
                break
            yield UpdateEvent(Kind.DELETE, eu[i], ev[i])
            remaining -= 1


def _gen_clique(spec: WorkloadSpec, rng) -> Iterator[UpdateEvent]:
    n = spec.n
    size = min(spec.clique_size, n)
    remaining = spec.k
    while remaining > 0:
        verts = sorted(rng.choice(n, size=size, replace=False).tolist())
        edges = [(verts[i], verts[j]) for i in range(size) for j in range(i + 1, size)]
        order = rng.permutation(len(edges)).tolist()
        inserted = []
        for i in order:
            if remaining == 0:
                return
            inserted.append(edges[i])
            yield UpdateEvent(Kind.INSERT, *edges[i])
            remaining -= 1
        for i in rng.permutation(len(inserted)).tolist():
            if remaining == 0:
                return
            yield UpdateEvent(Kind.DELETE, *inserted[i])
            remaining -= 1


def _upper_pairs(n: int):
    iu, iv = np.triu_indices(n, k=1)
    return iu.astype(np.int32), iv.astype(np.int32)


_GENERATORS = {
    "uniform": _gen_uniform,
    "er": _gen_er,
    "window": _gen_window,
    "hub": _gen_hub,
    "clique": _gen_clique,
}


def generate(spec: WorkloadSpec) -> list[UpdateEvent]:
    """Exactly ``spec.k`` well-formed events starting from the empty graph."""
    rng = make_rng(spec.seed, "workload", spec.family, spec.n)
    out = list(_GENERATORS[spec.family](spec, rng))
    assert len(out) == spec.k
    return out


def check_well_formed(n: int, events: Iterable[UpdateEvent]) -> None:
    """Replay ``events`` against a fresh presence set; raise ValueError on the first bad one."""
    present: set = set()
    for i, (kind, u, v) in enumerate(events):
        if not (0 <= u < v < n):
            raise ValueError(f"event {i}: bad endpoints ({u}, {v}) for n={n}")
        if kind:
            if (u, v) in present:
                raise ValueError(f"event {i}: insert of present edge ({u}, {v})")
            present.add((u, v))
        else:
            if (u, v) not in present:
                raise ValueError(f"event {i}: delete of absent edge ({u}, {v})")
            present.remove((u, v))


# -- file format -------------------------------------------------------------


def format_updates(n: int, events: Iterable[UpdateEvent]) -> str:
    lines = [f"n {n}"]
    lines.extend(f"{'+' if k else '-'} {u} {v}" for k, u, v in events)
    return "\n".join(lines) + "\n"


def write_updates(n: int, events: Iterable[UpdateEvent], sink: Union[str, Path, io.TextIOBase]) -> None:
    text = format_updates(n, events)
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text, encoding="utf-8")
    else:
        sink.write(text)


def parse_updates(text: str) -> tuple[int, list[UpdateEvent]]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise WorkloadFormatError(1, "missing header 'n <N>'")
    head = lines[0].split(" ")
    if len(head) != 2 or head[0] != "n" or not head[1].isdigit():
        raise WorkloadFormatError(1, f"expected header 'n <N>', got {lines[0]!r}")
    n = int(head[1])
    if n < 1:
        raise WorkloadFormatError(1, "vertex count must be positive")
    out = []
    ins, dele = Kind.INSERT, Kind.DELETE
    for no, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        if len(parts) != 3:
            raise WorkloadFormatError(no, f"expected '<+|-> u v', got {line!r}")
        op, a, b = parts
        if op == "+":
            kind = ins
        elif op == "-":
            kind = dele
        else:
            raise WorkloadFormatError(no, f"unknown operation {op!r}")
        if not (a.isdigit() and b.isdigit()):
            raise WorkloadFormatError(no, f"vertex ids must be non-negative integers, got {line!r}")
        u, v = int(a), int(b)
        if not u < v:
            raise WorkloadFormatError(no, f"endpoints must satisfy u < v, got {u} {v}")
        if v >= n:
            raise WorkloadFormatError(no, f"vertex {v} outside [0, {n})")
        out.append(UpdateEvent(kind, u, v))
    return n, out


def read_updates(source: Union[str, Path, io.TextIOBase]) -> tuple[int, list[UpdateEvent]]:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    return parse_updates(text)
