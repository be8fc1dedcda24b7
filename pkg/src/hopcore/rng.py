"""Named random streams derived from one root seed.

Every random draw in the library goes through a :class:`numpy.random.Generator`
passed in by the caller.  The helpers here derive independent generators from a
root seed by (purpose, index), so parallel or reordered work stays reproducible.
"""

from __future__ import annotations

import os
import zlib

import numpy as np

SEED_ENV = "HOPCORE_SEED"


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    return int(raw)


def stream(seed: int, purpose: str = "main", index: int = 0) -> np.random.Generator:
    """Return the generator for ``(seed, purpose, index)``.

    The purpose string is hashed with CRC32 so the derivation is stable across
    interpreter runs (``hash()`` is salted).
    """
    key = (zlib.crc32(purpose.encode("utf-8")), int(index))
    ss = np.random.SeedSequence(entropy=int(seed) & ((1 << 64) - 1), spawn_key=key)
    return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng) -> np.random.Generator:
    if rng is None:
        return stream(default_seed())
    if isinstance(rng, np.random.Generator):
        return rng
    return stream(int(rng))
