"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np


def as_spin_vector(spins, num_spins: int) -> np.ndarray:
    """Coerce ``spins`` to a length-``num_spins`` int8 vector of +/-1 values.

    Accepts any sequence or array; returns a fresh contiguous array so the
    caller is free to mutate it.
    """
    arr = np.asarray(spins)
    if arr.ndim != 1 or arr.shape[0] != num_spins:
        raise ValueError(
            f"expected a spin vector of length {num_spins}, got shape {arr.shape}"
        )
    out = arr.astype(np.int8, copy=True)
    if not np.all(np.abs(out) == 1):
        raise ValueError("spin values must be +1 or -1")
    return np.ascontiguousarray(out)


def check_spin_index(index: int, num_spins: int) -> int:
    index = int(index)
    if not 0 <= index < num_spins:
        raise IndexError(f"spin index {index} out of range [0, {num_spins})")
    return index


def check_rng(rng) -> np.random.Generator:
    """Accept a Generator, a seed, or None (fresh entropy)."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
