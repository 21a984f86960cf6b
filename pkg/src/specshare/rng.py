"""Deterministic, counter-based random stream derivation.

Every stochastic routine in the package draws from a generator derived
from a ``StreamKey``: a master seed plus a path of labels such as
``("trial", 17, "g_p")``.  Keys are hashed into the numpy ``SeedSequence``
spawn key, so streams are independent, order-insensitive, and stable
across runs and platforms.  Parallel trial execution therefore produces
exactly the same draws as serial execution.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np


def _key_words(key: int | str) -> tuple[int, ...]:
    # uint32 words keep the spawn key portable across numpy versions
    if isinstance(key, bool):
        raise TypeError("stream keys must be ints or strings, not bool")
    if isinstance(key, int):
        if key < 0:
            raise ValueError(f"stream keys must be nonnegative, got {key}")
        lo, hi = key & 0xFFFFFFFF, key >> 32
        return (lo, hi & 0xFFFFFFFF) if hi else (lo,)
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return tuple(int.from_bytes(digest[i : i + 4], "little") for i in range(0, 8, 4))


@dataclass(frozen=True)
class StreamKey:
    """Identity of a reproducible random stream: master seed plus a label path."""

    seed: int
    path: tuple[int, ...] = field(default_factory=tuple)

    def child(self, *keys: int | str) -> "StreamKey":
        """Derive a sub-stream key by appending labels to the path."""
        words: tuple[int, ...] = self.path
        for key in keys:
            words = words + _key_words(key)
        return StreamKey(self.seed, words)

    def generator(self) -> np.random.Generator:
        """Fresh generator for this key; repeated calls restart the stream."""
        return np.random.default_rng(
            np.random.SeedSequence(entropy=self.seed, spawn_key=self.path)
        )
