"""Deterministic keyed random streams.

Every stochastic draw in a trial is addressed by (seed, channel, *key) instead
of consuming positions from one shared sequential stream.  Removing a draw
(e.g. a patched vulnerability) therefore never shifts any other draw, which is
what makes paired comparisons between patch sets or policy variants align
trial for trial.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV53 = 1.0 / (1 << 53)

# Channel tags keep draws for different purposes statistically unrelated even
# when the remaining key parts collide.
TRIAL = 1
TOPOLOGY = 2
PROFILE = 3
PRESENCE = 4
PHISH = 5
ZERO_DAY = 6
NET_ACCESS = 7
FILE_PLACE = 8
SERVER_FLAG = 9


def _finalize(z: int) -> int:
    """splitmix64 finalizer on a 64-bit integer."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def derive(seed: int, *parts: int) -> int:
    """Fold integer key parts into a new 64-bit seed.

    Pure function of its arguments; order of parts matters.
    """
    state = _finalize((seed & _MASK) ^ _GOLDEN)
    for part in parts:
        state = _finalize(state ^ ((part * _GOLDEN) & _MASK))
    return state


def uniform(seed: int, *parts: int) -> float:
    """One keyed draw in [0, 1)."""
    return (derive(seed, *parts) >> 11) * _INV53


def bernoulli(seed: int, p: float, *parts: int) -> bool:
    return uniform(seed, *parts) < p


def uniform_grid(seed: int, channel: int, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Keyed uniforms for every (row, col) pair, bit-identical to the scalar
    path uniform(seed, channel, row, col).

    rows and cols are 1-D integer arrays; result has shape (len(rows), len(cols)).
    """
    golden = np.uint64(_GOLDEN)
    state = np.uint64(derive(seed, channel))
    r = _vec_finalize(state ^ (rows.astype(np.uint64)[:, None] * golden))
    rc = _vec_finalize(r ^ (cols.astype(np.uint64)[None, :] * golden))
    return (rc >> np.uint64(11)).astype(np.float64) * _INV53


def uniform_row(seed: int, channel: int, keys: np.ndarray) -> np.ndarray:
    """Keyed uniforms for a 1-D array of integer keys."""
    golden = np.uint64(_GOLDEN)
    state = np.uint64(derive(seed, channel))
    out = _vec_finalize(state ^ (keys.astype(np.uint64) * golden))
    return (out >> np.uint64(11)).astype(np.float64) * _INV53


def _vec_finalize(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def generator(seed: int, *parts: int) -> np.random.Generator:
    """A numpy Generator for bulk sampling, keyed like derive()."""
    return np.random.Generator(np.random.PCG64(derive(seed, *parts)))
