"""Clause-centric representation of higher-order Ising problems.

An instance is a sparse set of interaction terms: term ``k`` couples the
spins in ``C_k`` with weight ``J_k``, and the energy of a bipolar spin
vector ``s`` is ``E(s) = -sum_k J_k * T_k`` where ``T_k = prod_{i in C_k} s_i``
is the clause output.  All solver dynamics run on the clause outputs:
flipping spin ``i`` negates exactly the outputs of the terms containing it,
and the energy change is ``2 * sum_{k in N(i)} J_k * T_k`` where ``N(i)``
is the set of terms containing ``i``.

The incidence is stored twice in CSR form (terms -> spins and the
transpose spins -> terms) so both the clause products and the per-spin
input sums are cheap.  Weights are float64; for integer-valued weights
(every benchmark here) float64 accumulation is exact, so the energy
bookkeeping never drifts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .validation import as_spin_vector, check_spin_index

__all__ = [
    "ClauseSystem",
    "ClauseState",
    "build_clause_system",
    "clause_outputs",
    "delta_energy",
    "spin_input",
    "spin_inputs",
    "apply_flip",
    "random_spins",
]


@dataclass(frozen=True)
class ClauseSystem:
    """Immutable sparse clause-spin incidence with per-term weights.

    ``term_ptr``/``term_cols`` hold, for each term, the ascending spin
    indices of its members; ``spin_ptr``/``spin_rows`` are the transpose
    (for each spin, the terms containing it).  ``column_weight_sum[i]`` is
    ``sum_{k in N(i)} J_k``, the precomputed column sum used by the binary
    clause-output formulation.
    """

    num_spins: int
    num_terms: int
    term_ptr: np.ndarray
    term_cols: np.ndarray
    term_weight: np.ndarray
    spin_ptr: np.ndarray
    spin_rows: np.ndarray
    column_weight_sum: np.ndarray
    integral_weights: bool

    def term_spins(self, k: int) -> np.ndarray:
        """Member spin indices of term ``k`` (ascending)."""
        return self.term_cols[self.term_ptr[k]:self.term_ptr[k + 1]]

    def spin_terms(self, i: int) -> np.ndarray:
        """Indices of the terms containing spin ``i`` (the neighborhood)."""
        return self.spin_rows[self.spin_ptr[i]:self.spin_ptr[i + 1]]

    @property
    def nnz(self) -> int:
        return int(self.term_cols.shape[0])

    @property
    def max_order(self) -> int:
        if self.num_terms == 0:
            return 0
        return int(np.max(np.diff(self.term_ptr)))

    def term_orders(self) -> np.ndarray:
        return np.diff(self.term_ptr)


@dataclass
class ClauseState:
    """Mutable clause outputs plus incrementally maintained energy."""

    outputs: np.ndarray  # int8, +/-1 per term
    energy: float


def build_clause_system(terms, num_spins: int) -> ClauseSystem:
    """Assemble a :class:`ClauseSystem` from ``(spin_indices, weight)`` pairs.

    Duplicate index sets are merged by summing their weights (like terms are
    collected once, here); terms whose merged weight is exactly zero are
    dropped.  Within a term the indices must be distinct: ``s_i**2 == 1``
    means a repeated index changes the term's meaning, so it is rejected
    rather than silently collapsed.
    """
    num_spins = int(num_spins)
    if num_spins <= 0:
        raise ValueError("num_spins must be positive")

    merged: dict[tuple[int, ...], float] = {}
    for members, weight in terms:
        key = tuple(sorted(int(i) for i in members))
        if len(key) == 0:
            raise ValueError("empty term set")
        if key[0] < 0 or key[-1] >= num_spins:
            raise IndexError(f"term {key} has a spin index outside [0, {num_spins})")
        if len(set(key)) != len(key):
            raise ValueError(f"duplicate spin index within term {key}")
        merged[key] = merged.get(key, 0.0) + float(weight)

    keys = [k for k, w in merged.items() if w != 0.0]
    weights = np.array([merged[k] for k in keys], dtype=np.float64)
    m = len(keys)

    term_ptr = np.zeros(m + 1, dtype=np.int64)
    for k, members in enumerate(keys):
        term_ptr[k + 1] = term_ptr[k] + len(members)
    term_cols = np.empty(term_ptr[-1], dtype=np.int32)
    for k, members in enumerate(keys):
        term_cols[term_ptr[k]:term_ptr[k + 1]] = members

    # Transpose adjacency via a counting pass.
    counts = np.bincount(term_cols, minlength=num_spins) if m else np.zeros(num_spins, dtype=np.int64)
    spin_ptr = np.zeros(num_spins + 1, dtype=np.int64)
    np.cumsum(counts, out=spin_ptr[1:])
    spin_rows = np.empty(spin_ptr[-1], dtype=np.int32)
    cursor = spin_ptr[:-1].copy()
    for k in range(m):
        for i in term_cols[term_ptr[k]:term_ptr[k + 1]]:
            spin_rows[cursor[i]] = k
            cursor[i] += 1

    col_sum = np.zeros(num_spins, dtype=np.float64)
    if m:
        np.add.at(col_sum, term_cols, np.repeat(weights, np.diff(term_ptr)))

    integral = bool(m == 0 or np.all(weights == np.round(weights)))

    system = ClauseSystem(
        num_spins=num_spins,
        num_terms=m,
        term_ptr=term_ptr,
        term_cols=term_cols,
        term_weight=weights,
        spin_ptr=spin_ptr,
        spin_rows=spin_rows,
        column_weight_sum=col_sum,
        integral_weights=integral,
    )
    _check_transpose(system)
    return system


def _check_transpose(system: ClauseSystem) -> None:
    # Cross-check: spin_rows must be exactly the transpose of term_cols.
    pairs_a = {(int(k), int(i))
               for k in range(system.num_terms)
               for i in system.term_spins(k)}
    pairs_b = {(int(k), int(i))
               for i in range(system.num_spins)
               for k in system.spin_terms(i)}
    if pairs_a != pairs_b:
        raise AssertionError("incidence transpose mismatch")


def clause_outputs(system: ClauseSystem, spins) -> ClauseState:
    """Evaluate every clause output ``T_k`` and the energy from scratch."""
    s = as_spin_vector(spins, system.num_spins)
    if system.num_terms == 0:
        return ClauseState(outputs=np.empty(0, dtype=np.int8), energy=0.0)
    prods = np.multiply.reduceat(s[system.term_cols].astype(np.int64), system.term_ptr[:-1])
    outputs = prods.astype(np.int8)
    energy = -float(np.dot(system.term_weight, prods))
    return ClauseState(outputs=outputs, energy=energy)


def spin_input(system: ClauseSystem, state: ClauseState, spin: int) -> float:
    """Weighted clause-output sum ``S_i = sum_{k in N(i)} J_k T_k``.

    This is the quantity each latent neuron integrates; it equals half the
    energy change of flipping spin ``i``.
    """
    i = check_spin_index(spin, system.num_spins)
    rows = system.spin_terms(i)
    if rows.size == 0:
        return 0.0
    return float(np.dot(system.term_weight[rows], state.outputs[rows].astype(np.float64)))


def spin_inputs(system: ClauseSystem, state: ClauseState) -> np.ndarray:
    """Vector of ``S_i`` for every spin."""
    out = np.zeros(system.num_spins, dtype=np.float64)
    if system.num_terms:
        contrib = system.term_weight * state.outputs
        np.add.at(out, system.term_cols, np.repeat(contrib, np.diff(system.term_ptr)))
    return out


def delta_energy(system: ClauseSystem, state: ClauseState, spin: int) -> float:
    """Energy change of flipping ``spin``: ``2 * sum_{k in N(i)} J_k T_k``."""
    return 2.0 * spin_input(system, state, spin)


def apply_flip(system: ClauseSystem, state: ClauseState, spins: np.ndarray, spin: int) -> None:
    """Flip one spin in place, negating its clause outputs and updating energy."""
    i = check_spin_index(spin, system.num_spins)
    rows = system.spin_terms(i)
    if rows.size:
        de = 2.0 * float(np.dot(system.term_weight[rows], state.outputs[rows].astype(np.float64)))
        state.outputs[rows] = -state.outputs[rows]
        state.energy += de
    spins[i] = -spins[i]


def random_spins(num_spins: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random bipolar vector (the solver's default initial state)."""
    return (rng.integers(0, 2, size=num_spins, dtype=np.int8) * 2 - 1).astype(np.int8)
