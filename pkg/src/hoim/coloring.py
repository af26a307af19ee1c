"""Spin conflict graph and DSATUR coloring for conflict-free parallel updates.

Two spins conflict when some clause contains both; spins of one color can
then flip simultaneously, since every clause sees at most one flip and its
output parity stays well-defined.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ClauseSystem

__all__ = ["Coloring", "conflict_graph", "dsatur_color", "validate_coloring"]


@dataclass(frozen=True)
class Coloring:
    """Partition of spins into conflict-free groups.

    ``groups[r]`` holds the spin indices of color ``r`` (ascending);
    ``spin_color[i]`` is the color of spin ``i``.
    """

    groups: tuple[np.ndarray, ...]
    spin_color: np.ndarray

    @property
    def num_colors(self) -> int:
        return len(self.groups)

    def group_sizes(self) -> list[int]:
        return [int(g.size) for g in self.groups]


def conflict_graph(system: ClauseSystem) -> list[np.ndarray]:
    """Adjacency lists: ``i`` and ``j`` are neighbors iff they share a clause."""
    neighbors: list[set[int]] = [set() for _ in range(system.num_spins)]
    for k in range(system.num_terms):
        members = system.term_spins(k)
        for a in range(members.size):
            ia = int(members[a])
            for b in range(a + 1, members.size):
                ib = int(members[b])
                neighbors[ia].add(ib)
                neighbors[ib].add(ia)
    return [np.array(sorted(ns), dtype=np.int64) for ns in neighbors]


def dsatur_color(graph: list[np.ndarray]) -> Coloring:
    """Greedy DSATUR coloring.

    Repeatedly colors the vertex with the most distinctly-colored neighbors,
    breaking ties by higher degree, then by lower index, and assigns it the
    smallest color unused among its neighbors.  Deterministic.
    """
    n = len(graph)
    if n == 0:
        raise ValueError("graph must have at least one vertex")

    degree = np.array([g.size for g in graph], dtype=np.int64)
    color = np.full(n, -1, dtype=np.int64)
    neighbor_colors: list[set[int]] = [set() for _ in range(n)]

    for _ in range(n):
        best = -1
        best_sat = -1
        best_deg = -1
        for v in range(n):
            if color[v] >= 0:
                continue
            sat = len(neighbor_colors[v])
            deg = int(degree[v])
            if sat > best_sat or (sat == best_sat and deg > best_deg):
                best, best_sat, best_deg = v, sat, deg
        used = neighbor_colors[best]
        c = 0
        while c in used:
            c += 1
        color[best] = c
        for w in graph[best]:
            if color[w] < 0:
                neighbor_colors[w].add(c)

    num_colors = int(color.max()) + 1
    groups = tuple(np.flatnonzero(color == r).astype(np.int64) for r in range(num_colors))
    return Coloring(groups=groups, spin_color=color)


def validate_coloring(system: ClauseSystem, coloring: Coloring) -> bool:
    """True iff the groups partition the spins and no clause repeats a color."""
    n = system.num_spins
    if coloring.spin_color.shape != (n,):
        return False
    seen = np.zeros(n, dtype=bool)
    for r, group in enumerate(coloring.groups):
        for i in group:
            if i < 0 or i >= n or seen[i]:
                return False
            if coloring.spin_color[i] != r:
                return False
            seen[i] = True
    if not seen.all():
        return False
    for k in range(system.num_terms):
        members = system.term_spins(k)
        colors = coloring.spin_color[members]
        if np.unique(colors).size != colors.size:
            return False
    return True
