"""Deterministic random-stream derivation for all Monte-Carlo code.

Every stochastic routine in the package draws from a Philox generator
(a counter-based, 64-bit algorithm) keyed through ``numpy.random.SeedSequence``
spawn keys. A stream is addressed by a root seed plus a path of integers
and short string labels, so replication i of an experiment always sees the
same draws no matter how the work is scheduled or how many workers run it.
"""

import zlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _encode_part(part) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("ascii"))
    value = int(part)
    if value < 0:
        raise ValueError(f"stream path parts must be nonnegative, got {part!r}")
    return value


def substream(seed: int, *path) -> np.random.Generator:
    """Generator for the stream addressed by ``seed`` and ``path``.

    ``path`` parts are nonnegative integers or short ASCII labels.
    Equal (seed, path) pairs always yield identical generators.
    """
    key = tuple(_encode_part(p) for p in path)
    ss = np.random.SeedSequence(entropy=int(seed) & _MASK64, spawn_key=key)
    return np.random.Generator(np.random.Philox(ss))


def substream_seed(seed: int, *path) -> int:
    """A 64-bit child seed for the stream addressed by ``seed`` and ``path``.

    Used to hand a single integer to code that derives its own substreams.
    """
    key = tuple(_encode_part(p) for p in path)
    ss = np.random.SeedSequence(entropy=int(seed) & _MASK64, spawn_key=key)
    return int(ss.generate_state(1, np.uint64)[0])
