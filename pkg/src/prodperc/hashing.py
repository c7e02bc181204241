"""Stateless 64-bit coins keyed by (seed, index).

Every random decision in the package goes through one definition:

    key      = splitmix64(seed, 1)
    word     = splitmix64(key, index + 1)
    uniform  = (word >> 11) * 2**-53          in [0, 1)

where ``splitmix64(state, i)`` is the ``i``-th output of Vigna's SplitMix64
generator started from ``state``: add ``i * 0x9E3779B97F4A7C15`` and apply
the finalizer ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
z *= 0x94D049BB133111EB; z ^= z >> 31`` (all mod 2**64).

An edge with id ``e`` is open at probability ``p`` iff ``uniform(seed, e) < p``,
which makes the coupling across ``p`` literal.
"""

from __future__ import annotations

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV_2_53 = 1.0 / (1 << 53)

# Second-round seeds in two-round exposure are ``seed ^ SECOND_ROUND_SALT``.
SECOND_ROUND_SALT = 0x5851F42D4C957F2D


def splitmix64(state: int, i: int) -> int:
    z = (state + i * GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def stream_key(seed: int) -> int:
    return splitmix64(seed & MASK64, 1)


def word(seed: int, index: int) -> int:
    return splitmix64(stream_key(seed), index + 1)


def uniform(seed: int, index: int) -> float:
    return (word(seed, index) >> 11) * _INV_2_53


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def stream_keys(seeds) -> np.ndarray:
    s = np.asarray(seeds, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix_array(s + np.uint64(GOLDEN))


def uniforms(seed: int, indices) -> np.ndarray:
    """Vectorised :func:`uniform` over an array of indices for one seed."""
    idx = np.asarray(indices, dtype=np.uint64)
    key = np.uint64(stream_key(seed))
    with np.errstate(over="ignore"):
        z = key + (idx + np.uint64(1)) * np.uint64(GOLDEN)
        z = _mix_array(z)
    return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53


def uniforms_grid(seeds, indices) -> np.ndarray:
    """``out[s, i] = uniform(seeds[s], indices[i])``."""
    keys = stream_keys(seeds)[:, None]
    idx = np.asarray(indices, dtype=np.uint64)[None, :]
    with np.errstate(over="ignore"):
        z = keys + (idx + np.uint64(1)) * np.uint64(GOLDEN)
        z = _mix_array(z)
    return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53


class CoinStream:
    """Sequential uniforms ``uniform(seed, 0), uniform(seed, 1), ...``."""

    __slots__ = ("_key", "_i")

    def __init__(self, seed: int):
        self._key = stream_key(seed)
        self._i = 0

    def random(self) -> float:
        self._i += 1
        z = (self._key + self._i * GOLDEN) & MASK64
        z = ((z ^ (z >> 30)) * _M1) & MASK64
        z = ((z ^ (z >> 27)) * _M2) & MASK64
        return ((z ^ (z >> 31)) >> 11) * _INV_2_53
