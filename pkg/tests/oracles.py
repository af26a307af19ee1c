"""Independent brute-force reference implementations.

Everything here evaluates the defining formulas directly from raw term
lists, clause lists or edge lists, never through the package's incidence
structures, so tests can cross-check the fast paths against first
principles.
"""

from __future__ import annotations

import itertools

import numpy as np


def energy_direct(terms, spins) -> float:
    """E(s) = -sum_k J_k prod_{i in C_k} s_i, straight from the definition."""
    total = 0.0
    for members, weight in terms:
        prod = 1.0
        for i in members:
            prod *= spins[i]
        total -= weight * prod
    return total


def all_spin_states(n: int):
    for bits in itertools.product((-1, 1), repeat=n):
        yield np.array(bits, dtype=np.int8)


def brute_min_energy(terms, n: int) -> float:
    return min(energy_direct(terms, s) for s in all_spin_states(n))


def brute_minimizers(terms, n: int) -> set[tuple[int, ...]]:
    best = None
    argmin: set[tuple[int, ...]] = set()
    for s in all_spin_states(n):
        e = energy_direct(terms, s)
        if best is None or e < best - 1e-12:
            best = e
            argmin = {tuple(int(x) for x in s)}
        elif abs(e - best) <= 1e-12:
            argmin.add(tuple(int(x) for x in s))
    return argmin


def clause_satisfied(clause, spins) -> bool:
    """Literal is true iff its sign matches the spin (+1 <-> true)."""
    for lit in clause:
        if (lit > 0 and spins[abs(lit) - 1] == 1) or (lit < 0 and spins[abs(lit) - 1] == -1):
            return True
    return False


def count_satisfied(clauses, spins) -> int:
    return sum(clause_satisfied(c, spins) for c in clauses)


def brute_max_sat(clauses, n: int):
    """(max satisfied count, set of maximizing spin tuples)."""
    best = -1
    argmax: set[tuple[int, ...]] = set()
    for s in all_spin_states(n):
        c = count_satisfied(clauses, s)
        if c > best:
            best = c
            argmax = {tuple(int(x) for x in s)}
        elif c == best:
            argmax.add(tuple(int(x) for x in s))
    return best, argmax


def cut_direct(edges, spins) -> float:
    return sum(w for u, v, w in edges if spins[u] != spins[v])


def brute_max_cut(edges, n: int):
    """(max cut value, set of maximizing spin tuples)."""
    best = None
    argmax: set[tuple[int, ...]] = set()
    for s in all_spin_states(n):
        c = cut_direct(edges, s)
        if best is None or c > best + 1e-12:
            best = c
            argmax = {tuple(int(x) for x in s)}
        elif abs(c - best) <= 1e-12:
            argmax.add(tuple(int(x) for x in s))
    return best, argmax


def random_term_list(rng, num_spins, num_terms, max_order, integer_weights=True):
    """Random sparse higher-order instance as a raw term list."""
    terms = []
    for _ in range(num_terms):
        order = int(rng.integers(1, max_order + 1))
        order = min(order, num_spins)
        members = tuple(sorted(rng.choice(num_spins, size=order, replace=False).tolist()))
        if integer_weights:
            weight = float(rng.integers(1, 4)) * (1 if rng.random() < 0.5 else -1)
        else:
            weight = float(rng.normal())
        terms.append((members, weight))
    return terms
