"""Splittable counter-based random streams.

A replication's stream is a 64-bit key ``split(master_seed, i)``; the coin for
arc ``e`` in that replication is a pure function of ``(key, e)``. Any schedule of
replications therefore sees the same coins, and the numba and numpy kernels
reproduce each other bit for bit.
"""
from __future__ import annotations

import zlib

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
INV_2_53 = 1.0 / (1 << 53)


def mix64(z: int) -> int:
    """SplitMix64 finalizer on Python ints."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def split(master_seed: int, index: int) -> int:
    """Key of the ``index``-th child stream of ``master_seed``."""
    return mix64((master_seed & MASK64) + GOLDEN * (index + 1))


def split_many(master_seed: int, count: int, start: int = 0) -> np.ndarray:
    """Keys ``split(master_seed, i)`` for ``i in [start, start+count)`` as uint64."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(master_seed & MASK64) + np.uint64(GOLDEN) * idx
    return mix64_array(z)


def mix64_array(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


def coin_uniform(key: int, arc: int) -> float:
    """Uniform in [0, 1) drawn for ``arc`` in the stream ``key``."""
    return (mix64(key + GOLDEN * (arc + 1)) >> 11) * INV_2_53


def derive_seed(master_seed: int, *labels) -> int:
    """Child seed for a tagged job (method name, alpha, k, trial...).

    Labels are hashed with CRC32 / integer packing through ``numpy.random.SeedSequence``
    so the result is stable across processes and Python versions.
    """
    words = []
    for lab in labels:
        if isinstance(lab, str):
            words.append(zlib.crc32(lab.encode("utf-8")))
        elif isinstance(lab, float):
            words.append(int(round(lab * 1_000_000)))
        else:
            words.append(int(lab))
    ss = np.random.SeedSequence(entropy=master_seed & MASK64, spawn_key=tuple(words))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
