"""Counter-based random streams keyed by (seed, sample index).

Every Monte Carlo sample owns a SplitMix64 stream whose state is
``key = mix64(mix64(seed) + index)`` (arithmetic mod 2⁶⁴). Word ``j`` of that
stream is ``mix64(key + (j + 1) * GOLDEN)``. Nothing depends on which worker
draws a sample, so serial and parallel runs see identical numbers.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TWO53 = 1.0 / float(1 << 53)
MASK64 = (1 << 64) - 1


def mix64(x) -> np.ndarray:
    """SplitMix64 finalizer, elementwise over uint64."""
    z = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = z ^ (z >> np.uint64(30))
        z = z * _M1
        z = z ^ (z >> np.uint64(27))
        z = z * _M2
        z = z ^ (z >> np.uint64(31))
    return z


def sample_keys(seed: int, indices) -> np.ndarray:
    base = mix64(np.uint64(seed & MASK64))
    idx = np.asarray(indices, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(base + idx)


def words(seed: int, indices, m: int) -> np.ndarray:
    """Array of shape (len(indices), m) of raw 64-bit words."""
    keys = sample_keys(seed, indices)[:, None]
    steps = (np.arange(1, m + 1, dtype=np.uint64) * GOLDEN)[None, :]
    with np.errstate(over="ignore"):
        return mix64(keys + steps)


def uniforms(seed: int, indices, m: int) -> np.ndarray:
    """Uniform doubles on [0, 1), 53-bit resolution."""
    return (words(seed, indices, m) >> np.uint64(11)).astype(np.float64) * _TWO53


def normals(seed: int, indices, m: int) -> np.ndarray:
    """Standard normals via Box–Muller, shape (len(indices), m)."""
    pairs = (m + 1) // 2
    u = uniforms(seed, indices, 2 * pairs)
    r = np.sqrt(-2.0 * np.log1p(-u[:, 0::2]))
    t = 2.0 * np.pi * u[:, 1::2]
    z = np.empty((u.shape[0], 2 * pairs))
    z[:, 0::2] = r * np.cos(t)
    z[:, 1::2] = r * np.sin(t)
    return z[:, :m]


def generator(seed: int, index: int = 0) -> np.random.Generator:
    """A numpy Generator seeded from the (seed, index) key."""
    key = int(sample_keys(seed, [index])[0])
    return np.random.Generator(np.random.PCG64(key))
