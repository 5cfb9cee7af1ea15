"""Named random streams derived from a single run seed."""

import hashlib
from typing import Tuple, Union

import numpy as np

StreamName = Union[str, int]


def _name_word(name: StreamName) -> int:
    digest = hashlib.blake2b(str(name).encode("utf-8"), digest_size=4).digest()
    return int.from_bytes(digest, "little")


def seed_sequence(seed: int, *names: StreamName) -> np.random.SeedSequence:
    """Build the seed sequence for stream ``names`` under ``seed``.

    The same (seed, names) pair always yields the same sequence, and distinct
    name tuples yield statistically independent streams.
    """
    if seed < 0 or seed >= 2 ** 64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    spawn_key: Tuple[int, ...] = tuple(_name_word(name) for name in names)
    return np.random.SeedSequence(entropy=seed, spawn_key=spawn_key)


def rng_stream(seed: int, *names: StreamName) -> np.random.Generator:
    """Return the generator for stream ``names`` under ``seed``."""
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, *names)))


def child_seed(seed: int, *names: StreamName) -> int:
    """Derive a 64-bit integer seed for a sub-task."""
    state = seed_sequence(seed, *names).generate_state(2, dtype=np.uint32)
    return int(state[0]) | (int(state[1]) << 32)
