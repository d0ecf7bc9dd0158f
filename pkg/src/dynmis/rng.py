"""Seeded counter-based random streams (Philox), split by purpose."""

from __future__ import annotations

import zlib

import numpy as np


def make_rng(seed: int, *stream) -> np.random.Generator:
    """Independent Philox stream for ``seed`` and a purpose key.

    String keys are hashed with crc32 so the mapping is stable across runs
    and platforms.
    """
    keys = tuple(zlib.crc32(k.encode()) if isinstance(k, str) else int(k) for k in stream)
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=keys)
    return np.random.Generator(np.random.Philox(ss))
