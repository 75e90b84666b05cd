"""Seeded, splittable randomness and the samplers for every secret object.

Every random object is drawn from its own SplitMix64 stream. Streams are
keyed by ``(master_seed, trial_index, label)``; the derivation is fixed
bit-for-bit so outputs are identical across runs and platforms::

    mix64(z):
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)

    key  = mix64(seed + GAMMA)
    key  = mix64((key ^ trial_index) + GAMMA)
    key  = mix64((key ^ fnv1a64(utf8(label))) + GAMMA)
    out[n] = mix64(key + (n + 1) * GAMMA)          # n = 0, 1, 2, ...

All arithmetic is mod 2**64 and ``GAMMA = 0x9E3779B97F4A7C15``. A draw
below ``n`` rejects 64-bit outputs ``>= 2**64 - (2**64 % n)`` and returns
``out % n`` for the first accepted output.

The ``*_rows`` functions are vectorised equivalents of the scalar samplers
over many streams at once. They return exactly what the scalar sampler
would return for each stream.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SubsetTooLarge
from .field import Field

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & MASK64
    return h


def stream_key(master_seed: int, trial_index: int, label: str) -> int:
    k = mix64(master_seed + GAMMA)
    k = mix64((k ^ (trial_index & MASK64)) + GAMMA)
    return mix64((k ^ fnv1a64(label.encode("utf-8"))) + GAMMA)


def _rejection_limit(n: int) -> int:
    return (1 << 64) - ((1 << 64) % n)


class Rng:
    """A single SplitMix64 stream. Single-owner; do not share."""

    __slots__ = ("key", "counter")

    def __init__(self, key: int, counter: int = 0):
        self.key = key & MASK64
        self.counter = counter

    def next_u64(self) -> int:
        self.counter += 1
        return mix64(self.key + self.counter * GAMMA)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` without modulo bias."""
        if n < 1:
            raise ValueError("bound must be positive")
        limit = _rejection_limit(n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n


def derive_rng(master_seed: int, trial_index: int, stream_label: str) -> Rng:
    return Rng(stream_key(master_seed, trial_index, stream_label))


# -- scalar samplers ---------------------------------------------------------

@dataclass(frozen=True)
class Polynomial:
    """Coefficients in ascending degree; ``coeffs[j]`` multiplies ``X**j``."""

    coeffs: tuple[int, ...]

    @property
    def degree_bound(self) -> int:
        return len(self.coeffs) - 1


def sample_polynomial(rng: Rng, lam: int, field: Field) -> Polynomial:
    return Polynomial(tuple(rng.below(field.p) for _ in range(lam + 1)))


def sample_function(rng: Rng, field: Field) -> np.ndarray:
    """Value table of a uniform map F -> F; entry ``a`` is f(a)."""
    return np.array([rng.below(field.p) for _ in range(field.p)], dtype=np.int64)


def sample_permutation(rng: Rng, size: int) -> np.ndarray:
    """Fisher-Yates shuffle of ``arange(size)``."""
    perm = list(range(size))
    for i in range(size - 1, 0, -1):
        j = rng.below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return np.array(perm, dtype=np.int64)


def sample_subset(rng: Rng, s: int, field: Field) -> np.ndarray:
    """Uniform ``s``-subset of F, sorted. Partial Fisher-Yates on ``[0, q)``."""
    q = field.p
    if s > q:
        raise SubsetTooLarge(f"subset size {s} exceeds field size {q}")
    if s < 0:
        raise ValueError("subset size must be nonnegative")
    arr = list(range(q))
    for k in range(s):
        j = k + rng.below(q - k)
        arr[k], arr[j] = arr[j], arr[k]
    return np.array(sorted(arr[:s]), dtype=np.int64)


# -- vectorised samplers over many streams ------------------------------------

def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


@lru_cache(maxsize=64)
def _label_hashes(prefix: str, count: int) -> np.ndarray:
    out = np.array(
        [fnv1a64(f"{prefix}:{i}".encode("utf-8")) for i in range(count)], dtype=np.uint64
    )
    out.flags.writeable = False
    return out


def row_keys(master_seed: int, trial_index: int, prefix: str, count: int) -> np.ndarray:
    """Stream keys for labels ``f"{prefix}:{i}"``, ``i < count``."""
    k = mix64(master_seed + GAMMA)
    k = mix64((k ^ (trial_index & MASK64)) + GAMMA)
    z = (np.uint64(k) ^ _label_hashes(prefix, count)) + np.uint64(GAMMA)
    return _mix64_array(z)


def stream_block(keys: np.ndarray, width: int) -> np.ndarray:
    """First ``width`` raw outputs of each stream, shape ``(len(keys), width)``."""
    offsets = np.array([((j + 1) * GAMMA) & MASK64 for j in range(width)], dtype=np.uint64)
    return _mix64_array(keys.astype(np.uint64)[:, None] + offsets[None, :])


def uniform_rows(keys: np.ndarray, width: int, bound: int) -> np.ndarray:
    """``width`` draws below ``bound`` from each stream."""
    raw = stream_block(keys, width)
    out = (raw % np.uint64(bound)).astype(np.int64)
    limit = _rejection_limit(bound)
    if limit < (1 << 64):
        bad = np.nonzero((raw >= np.uint64(limit)).any(axis=1))[0]
        for r in bad:
            rng = Rng(int(keys[r]))
            out[r] = [rng.below(bound) for _ in range(width)]
    return out


def subset_rows(keys: np.ndarray, s: int, q: int) -> np.ndarray:
    """Sorted ``s``-subsets of ``[0, q)``, one per stream."""
    if s > q:
        raise SubsetTooLarge(f"subset size {s} exceeds field size {q}")
    n = len(keys)
    arr = np.tile(np.arange(q, dtype=np.int64), (n, 1))
    if s == 0:
        return arr[:, :0]
    raw = stream_block(keys, s)
    bounds = np.arange(q, q - s, -1, dtype=np.uint64)
    limits = [_rejection_limit(int(b)) for b in bounds]
    bad = np.zeros(n, dtype=bool)
    for k, lim in enumerate(limits):
        if lim < (1 << 64):
            bad |= raw[:, k] >= np.uint64(lim)
    offsets = (raw % bounds[None, :]).astype(np.int64)
    idx = np.arange(n)
    for k in range(s):
        j = k + offsets[:, k]
        tmp = arr[idx, k].copy()
        arr[idx, k] = arr[idx, j]
        arr[idx, j] = tmp
    out = np.sort(arr[:, :s], axis=1)
    field = Field(q) if np.any(bad) else None
    for r in np.nonzero(bad)[0]:
        out[r] = sample_subset(Rng(int(keys[r])), s, field)
    return out
