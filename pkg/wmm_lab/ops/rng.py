"""
Seeded random streams.

Every stochastic piece of the library takes an explicit ``numpy.random.Generator``.
Independent sub-streams are derived from a master seed and a key path through
``SeedSequence`` spawn keys, so enabling one consumer never shifts another's draws.
"""

import numpy as np

from wmm_lab.core.errors import InvalidArgumentError

type RngState = np.random.Generator

U64_MAX = 2**64 - 1


def _check_seed(seed: int) -> None:
    if not 0 <= seed <= U64_MAX:
        raise InvalidArgumentError(f"seed must be an unsigned 64-bit integer, got {seed}")


def make_rng(seed: int, *stream: int) -> RngState:
    """Return a PCG64 generator for ``seed``, optionally narrowed to the sub-stream ``stream``."""
    _check_seed(seed)
    sequence = np.random.SeedSequence(seed, spawn_key=stream)
    return np.random.Generator(np.random.PCG64(sequence))


def derive_seed(master: int, *keys: int) -> int:
    """Derive a child 64-bit seed from ``master`` and a key path (e.g. a trial index)."""
    _check_seed(master)
    sequence = np.random.SeedSequence(master, spawn_key=keys)
    return int(sequence.generate_state(1, dtype=np.uint64)[0])
