"""Second-order baseline: run the same annealer on quadratized systems.

A :class:`~hoim.problems.QuboSystem` (maximized objective ``H``) lowers to
a :class:`~hoim.model.ClauseSystem` with ``E = -H``, so the identical
solver loops apply; only the encoding differs.
"""

from __future__ import annotations

import numpy as np

from .model import ClauseSystem, build_clause_system, random_spins
from .problems import QuboSystem

__all__ = ["lower_qubo", "extend_initial_spins"]


def lower_qubo(qubo: QuboSystem) -> ClauseSystem:
    """One pairwise term per coupling, one single-spin term per bias."""
    terms = [((i, j), q) for i, j, q in qubo.pairwise]
    terms += [((i,), h) for i, h in qubo.linear]
    system = build_clause_system(terms, qubo.num_spins)
    if system.max_order > 2:
        raise AssertionError("lowered system has a term of order > 2")
    return system


def extend_initial_spins(init: np.ndarray, num_total: int,
                         rng: np.random.Generator) -> np.ndarray:
    """Carry an original-variable start over to the enlarged spin set.

    The original spins are copied and the auxiliary spins are drawn from
    the given stream, so paired higher-order/second-order runs share their
    starting point on the problem variables.
    """
    n = init.shape[0]
    if num_total < n:
        raise ValueError("num_total smaller than the original spin count")
    out = np.empty(num_total, dtype=np.int8)
    out[:n] = init
    out[n:] = random_spins(num_total - n, rng)
    return out
