"""
    Seeded random number streams.

    All randomness in fdpo_toolkit comes from numpy.random.Generator objects
    backed by PCG64. Independent streams for parallel trials are derived from a
    master seed with the SplitMix64 finalizer, so a trial's stream depends only on
    (master_seed, sweep_index, trial_index) and never on scheduling.
"""
import numpy as np


MASK64 = (1 << 64) - 1


def splitmix64(value: int) -> int:
    """
    SplitMix64 finalizer: a bijective 64-bit mixing hash.

    >>> splitmix64(0)
    16294208416658607535
    >>> splitmix64(1) != splitmix64(2)
    True
    """
    value = (value + 0x9E3779B97F4A7C15) & MASK64
    value = ((value ^ (value >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    value = ((value ^ (value >> 27)) * 0x94D049BB133111EB) & MASK64
    return value ^ (value >> 31)


def derive_seed(master_seed: int, *indices: int) -> int:
    """
    Derive a 64-bit seed from a master seed and any number of stream indices.

    >>> derive_seed(42, 0, 1) == derive_seed(42, 0, 1)
    True
    >>> derive_seed(42, 0, 1) == derive_seed(42, 1, 0)
    False
    """
    seed = splitmix64(int(master_seed) & MASK64)
    for index in indices:
        seed = splitmix64(seed ^ (int(index) & MASK64))
    return seed


def make_rng(seed: int) -> np.random.Generator:
    assert isinstance(seed, (int, np.integer)), f'Seed must be an integer, got: {type(seed).__name__}'
    return np.random.Generator(np.random.PCG64(int(seed) & MASK64))
