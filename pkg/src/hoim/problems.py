"""Benchmark front-ends: MAX-kSAT, MAX-CUT and planted 3R-3X XORSAT.

Each front-end lowers its problem to a :class:`~hoim.model.ClauseSystem`
whose energy minimum coincides with the problem optimum.  Boolean true is
spin +1 throughout (``literal = (1 + s)/2``).
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from .model import ClauseSystem, build_clause_system, clause_outputs
from .validation import as_spin_vector, check_rng

__all__ = [
    "CnfFormula",
    "WeightedGraph",
    "QuboSystem",
    "PlantedInstance",
    "CnfIsingMeta",
    "ResourceReport",
    "parse_dimacs_cnf",
    "cnf_to_ising",
    "satisfied_count",
    "parse_gset",
    "maxcut_to_ising",
    "cut_value",
    "gen_3r3x",
    "quadratize_cnf3",
    "quadratize_3r3x",
    "resource_report",
]

MAX_CLAUSE_LEN = 20  # expansion guard: a length-p clause becomes 2^p - 1 terms


@dataclass(frozen=True)
class CnfFormula:
    """CNF clauses as 1-based sign-encoded literal tuples.

    Duplicate literals inside a clause are removed at parse time; clauses
    containing a complementary pair are kept but flagged in ``tautologies``
    (they are excluded from the Ising mapping and from satisfied counts).
    """

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    tautologies: frozenset[int] = frozenset()

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def effective_clauses(self):
        """Clauses that participate in scoring (tautologies excluded)."""
        return [c for k, c in enumerate(self.clauses) if k not in self.tautologies]


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected weighted graph, 0-based, parallel edges merged."""

    num_vertices: int
    edges: tuple[tuple[int, int, float], ...]

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))


@dataclass(frozen=True)
class QuboSystem:
    """Second-order objective ``H(s) = sum Q_ij s_i s_j + sum h_i s_i``.

    The objective is MAXIMIZED over bipolar spins; the first ``num_vars``
    spins are the original problem variables, the rest are clause
    auxiliaries introduced by quadratization.
    """

    num_spins: int
    num_vars: int
    pairwise: tuple[tuple[int, int, float], ...]
    linear: tuple[tuple[int, float], ...]

    def objective(self, spins) -> float:
        s = as_spin_vector(spins, self.num_spins).astype(np.float64)
        total = 0.0
        for i, j, q in self.pairwise:
            total += q * s[i] * s[j]
        for i, h in self.linear:
            total += h * s[i]
        return total


@dataclass(frozen=True)
class PlantedInstance:
    """3-regular 3-XORSAT instance with an embedded satisfying assignment."""

    system: ClauseSystem
    planted_spins: np.ndarray
    rhs_bits: np.ndarray
    clause_vars: np.ndarray  # (M, 3) variable indices per parity equation


@dataclass(frozen=True)
class CnfIsingMeta:
    """Decode metadata tying a lowered CNF back to satisfied-clause counts."""

    num_vars: int
    num_clauses: int
    length_histogram: dict[int, int]
    dropped_tautologies: int = 0

    @property
    def uniform_length(self) -> int | None:
        if len(self.length_histogram) == 1:
            return next(iter(self.length_histogram))
        return None

    def full_sat_energy(self) -> float:
        """Every effective clause satisfied <=> energy == -num_clauses."""
        return -float(self.num_clauses)

    def energy_for_sat_count(self, count: int) -> float:
        """Energy threshold equivalent to satisfying >= ``count`` clauses.

        Each satisfied clause contributes -1 and each unsatisfied length-p
        clause contributes 2^p - 1; with uniform clause length the relation
        is affine and invertible.
        """
        p = self.uniform_length
        if p is None:
            raise ValueError("per-count targets need uniform clause length; "
                             "only the full-satisfaction target is available")
        m = self.num_clauses
        return float((m - count) * (2 ** p - 1) - count)

    def sat_count_from_energy(self, energy: float) -> float:
        p = self.uniform_length
        if p is None:
            raise ValueError("mixed clause lengths: recount from the spins instead")
        m = self.num_clauses
        return (m * (2 ** p - 1) - energy) / float(2 ** p)


def parse_dimacs_cnf(text: str) -> CnfFormula:
    """Parse DIMACS CNF; tolerant of '%'-terminated SATLIB files."""
    num_vars = None
    declared_clauses = None
    clauses: list[tuple[int, ...]] = []
    tautologies: set[int] = set()
    current: list[int] = []

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"malformed DIMACS header: {line!r}")
            num_vars = int(parts[2])
            declared_clauses = int(parts[3])
            continue
        if num_vars is None:
            raise ValueError("clause data before DIMACS header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                if current:
                    _finish_clause(current, clauses, tautologies, num_vars)
                    current = []
                continue
            current.append(lit)
    if current:
        _finish_clause(current, clauses, tautologies, num_vars)

    if num_vars is None:
        raise ValueError("missing DIMACS header")
    if declared_clauses is not None and declared_clauses != len(clauses):
        warnings.warn(
            f"header declares {declared_clauses} clauses but {len(clauses)} parsed; "
            "proceeding with the parsed count",
            stacklevel=2,
        )
    return CnfFormula(num_vars=num_vars, clauses=tuple(clauses),
                      tautologies=frozenset(tautologies))


def _finish_clause(lits, clauses, tautologies, num_vars):
    seen = []
    for lit in lits:
        if lit == 0 or abs(lit) > num_vars:
            raise ValueError(f"literal {lit} out of range for {num_vars} variables")
        if lit not in seen:
            seen.append(lit)
    idx = len(clauses)
    if any(-lit in seen for lit in seen):
        tautologies.add(idx)
    clauses.append(tuple(seen))


def cnf_to_ising(cnf: CnfFormula, max_clause_len: int = MAX_CLAUSE_LEN):
    """Lower a CNF to a higher-order Ising system by inclusion-exclusion.

    A length-p clause over literal spins ``t_1..t_p`` contributes
    ``sum_{l=1..p} (-1)^(l-1) * sum_{subsets of size l} prod t`` which is +1
    when satisfied and ``-(2^p - 1)`` otherwise; literal polarity folds a
    sign into each spin.  Returns ``(system, meta)``.
    """
    if cnf.tautologies:
        warnings.warn(
            f"dropping {len(cnf.tautologies)} tautological clause(s) from the mapping",
            stacklevel=2,
        )
    terms: list[tuple[tuple[int, ...], float]] = []
    histogram: dict[int, int] = {}
    effective = 0
    for k, clause in enumerate(cnf.clauses):
        if k in cnf.tautologies:
            continue
        p = len(clause)
        if p > max_clause_len:
            raise ValueError(f"clause length {p} exceeds the expansion cap {max_clause_len}")
        effective += 1
        histogram[p] = histogram.get(p, 0) + 1
        variables = [abs(lit) - 1 for lit in clause]
        signs = [1.0 if lit > 0 else -1.0 for lit in clause]
        for size in range(1, p + 1):
            layer = (-1.0) ** (size - 1)
            for subset in itertools.combinations(range(p), size):
                weight = layer
                for pos in subset:
                    weight *= signs[pos]
                terms.append((tuple(variables[pos] for pos in subset), weight))
    system = build_clause_system(terms, cnf.num_vars)
    meta = CnfIsingMeta(
        num_vars=cnf.num_vars,
        num_clauses=effective,
        length_histogram=histogram,
        dropped_tautologies=len(cnf.tautologies),
    )
    return system, meta


def satisfied_count(cnf: CnfFormula, spins) -> int:
    """Number of (non-tautological) clauses with at least one true literal."""
    s = as_spin_vector(spins, cnf.num_vars)
    count = 0
    for k, clause in enumerate(cnf.clauses):
        if k in cnf.tautologies:
            continue
        for lit in clause:
            value = s[abs(lit) - 1]
            if (lit > 0 and value == 1) or (lit < 0 and value == -1):
                count += 1
                break
    return count


def parse_gset(text: str) -> WeightedGraph:
    """Parse Gset format: header ``N M`` then 1-indexed ``u v w`` lines."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines())
             if ln and not ln.startswith(("c", "#", "%"))]
    if not lines:
        raise ValueError("empty Gset input")
    header = lines[0].split()
    if len(header) < 2:
        raise ValueError(f"malformed Gset header: {lines[0]!r}")
    n, m = int(header[0]), int(header[1])
    merged: dict[tuple[int, int], float] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"malformed Gset edge line: {ln!r}")
        u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValueError(f"vertex out of range in line {ln!r}")
        if u == v:
            raise ValueError(f"self-loop on vertex {u}")
        a, b = min(u, v) - 1, max(u, v) - 1
        merged[(a, b)] = merged.get((a, b), 0.0) + w
    if len(lines) - 1 != m:
        raise ValueError(f"header declares {m} edges but {len(lines) - 1} present")
    edges = tuple((a, b, w) for (a, b), w in merged.items())
    return WeightedGraph(num_vertices=n, edges=edges)


def maxcut_to_ising(graph: WeightedGraph) -> ClauseSystem:
    """One pairwise term per edge, weight ``-w/2``.

    With that sign, ``cut(s) = total_weight/2 - E(s)``, so minimizing the
    energy maximizes the cut.
    """
    terms = [((u, v), -w / 2.0) for u, v, w in graph.edges]
    return build_clause_system(terms, graph.num_vertices)


def cut_value(graph: WeightedGraph, spins) -> float:
    """Total weight of edges whose endpoints take opposite spins."""
    s = as_spin_vector(spins, graph.num_vertices).astype(np.float64)
    return float(sum(w * (1.0 - s[u] * s[v]) / 2.0 for u, v, w in graph.edges))


def gen_3r3x(num_vars: int, noise) -> PlantedInstance:
    """Generate a planted 3-regular 3-XORSAT instance.

    Pairs three stubs per variable into ``num_vars`` parity equations
    (configuration model), rejecting draws with a repeated variable inside
    an equation or two identical equations.  A random assignment is planted
    by choosing each right-hand bit to satisfy its equation; the Ising
    weights are ``(-1)^b_k`` so the planted state has energy ``-M``.
    """
    if num_vars < 4:
        raise ValueError("3-regular 3-XORSAT needs at least 4 variables")
    rng = check_rng(getattr(noise, "rng", noise))

    stubs = np.repeat(np.arange(num_vars), 3)
    for _ in range(1000):
        triples = rng.permutation(stubs).reshape(num_vars, 3)
        triples = np.sort(triples, axis=1)
        if np.any(np.diff(triples, axis=1) == 0):
            continue
        if np.unique(triples, axis=0).shape[0] != num_vars:
            continue
        break
    else:
        raise RuntimeError("configuration-model pairing failed after 1000 retries")

    assignment = rng.integers(0, 2, size=num_vars)
    rhs = assignment[triples].sum(axis=1) % 2
    weights = np.where(rhs == 0, 1.0, -1.0)

    system = build_clause_system(
        [(tuple(row), w) for row, w in zip(triples.tolist(), weights)], num_vars
    )
    planted = (1 - 2 * assignment).astype(np.int8)  # x=0 -> +1, x=1 -> -1
    state = clause_outputs(system, planted)
    if state.energy != -float(system.num_terms):
        raise AssertionError("planting failed: planted state is not the ground state")
    return PlantedInstance(
        system=system,
        planted_spins=planted,
        rhs_bits=rhs.astype(np.int8),
        clause_vars=triples.astype(np.int64),
    )


def _require_3sat(cnf: CnfFormula) -> list[tuple[int, ...]]:
    kept = []
    for k, clause in enumerate(cnf.clauses):
        if k in cnf.tautologies:
            continue
        if len(clause) != 3:
            raise ValueError(f"clause {k} has {len(clause)} literals; quadratization needs 3")
        kept.append(clause)
    if len(kept) != len(cnf.clauses):
        warnings.warn("tautological clauses dropped before quadratization", stacklevel=2)
    return kept


def quadratize_cnf3(cnf: CnfFormula) -> QuboSystem:
    """Quadratize MAX-3SAT with one auxiliary spin per clause.

    The cubic literal product of each clause is replaced by the gadget
    ``l1*l2*l3 = max_b b*(l1+l2+l3-2)`` over an auxiliary Boolean, giving
    per clause ``(s_a+1)(t1+t2+t3) - (t1 t2 + t2 t3 + t3 t1) - s_a`` in
    spin form (t = literal-signed spin).  The per-clause maximum is +2 when
    the clause is satisfiable by the assignment and -2 otherwise.
    """
    clauses = _require_3sat(cnf)
    n = cnf.num_vars
    pair: dict[tuple[int, int], float] = {}
    lin: dict[int, float] = {}

    def add_pair(i, j, q):
        key = (i, j) if i < j else (j, i)
        pair[key] = pair.get(key, 0.0) + q

    def add_lin(i, h):
        lin[i] = lin.get(i, 0.0) + h

    for k, clause in enumerate(clauses):
        a = n + k
        v = [abs(lit) - 1 for lit in clause]
        sg = [1.0 if lit > 0 else -1.0 for lit in clause]
        for idx in range(3):
            add_lin(v[idx], sg[idx])
            add_pair(a, v[idx], sg[idx])
        add_lin(a, -1.0)
        add_pair(v[0], v[1], -sg[0] * sg[1])
        add_pair(v[1], v[2], -sg[1] * sg[2])
        add_pair(v[0], v[2], -sg[0] * sg[2])

    return QuboSystem(
        num_spins=n + len(clauses),
        num_vars=n,
        pairwise=tuple((i, j, q) for (i, j), q in pair.items() if q != 0.0),
        linear=tuple((i, h) for i, h in lin.items() if h != 0.0),
    )


def quadratize_3r3x(instance: PlantedInstance) -> QuboSystem:
    """Quadratize each cubic parity term with one auxiliary spin.

    A clause with right-hand bit ``b`` asks for ``(-1)^b * s1 s2 s3 = +1``;
    the sign is folded into the first spin and the gadget
    ``(t1+t2+t3) - (t1 t2 + t2 t3 + t3 t1) - 2 s_a + 2 s_a (t1+t2+t3)``
    then attains ``3 + (-1)^b T_k`` at the optimal auxiliary, so the QUBO
    maximum is ``4M`` exactly when every equation holds.
    """
    n = instance.system.num_spins
    m = instance.clause_vars.shape[0]
    pair: dict[tuple[int, int], float] = {}
    lin: dict[int, float] = {}

    def add_pair(i, j, q):
        key = (i, j) if i < j else (j, i)
        pair[key] = pair.get(key, 0.0) + q

    def add_lin(i, h):
        lin[i] = lin.get(i, 0.0) + h

    for k in range(m):
        v = [int(x) for x in instance.clause_vars[k]]
        sg = [(-1.0 if instance.rhs_bits[k] else 1.0), 1.0, 1.0]
        a = n + k
        for idx in range(3):
            add_lin(v[idx], sg[idx])
            add_pair(a, v[idx], 2.0 * sg[idx])
        add_lin(a, -2.0)
        add_pair(v[0], v[1], -sg[0] * sg[1])
        add_pair(v[1], v[2], -sg[1] * sg[2])
        add_pair(v[0], v[2], -sg[0] * sg[2])

    return QuboSystem(
        num_spins=n + m,
        num_vars=n,
        pairwise=tuple((i, j, q) for (i, j), q in pair.items() if q != 0.0),
        linear=tuple((i, h) for i, h in lin.items() if h != 0.0),
    )


@dataclass(frozen=True)
class ResourceReport:
    """Second-order vs higher-order embedding cost of one problem."""

    num_vars: int
    num_aux: int
    variable_ratio: float
    qubo_entries: int          # dense (vars + aux)^2
    h_rows: int
    h_cols: int
    h_nnz: int
    interconnection_ratio_dense: float
    interconnection_ratio_nnz: float


def resource_report(problem) -> ResourceReport:
    """Compare quadratized vs direct higher-order resource requirements.

    Quadratization of a length-k clause is costed at k auxiliary spins
    (one for k = 3, none for k <= 2); the interconnection ratio is the
    dense quadratic matrix size over the higher-order incidence size,
    reported against both the dense row-by-column size and the nonzero
    count of the incidence.
    """
    if isinstance(problem, PlantedInstance):
        system = problem.system
        num_vars = system.num_spins
        num_aux = system.num_terms
    elif isinstance(problem, CnfFormula):
        num_vars = problem.num_vars
        num_aux = 0
        for clause in problem.effective_clauses():
            p = len(clause)
            if p <= 2:
                continue
            num_aux += 1 if p == 3 else p
        system, _ = cnf_to_ising(problem)
    else:
        raise TypeError("resource_report expects a CnfFormula or PlantedInstance")

    total = num_vars + num_aux
    qubo_entries = total * total
    rows, cols, nnz = system.num_terms, system.num_spins, system.nnz
    dense = rows * cols
    return ResourceReport(
        num_vars=num_vars,
        num_aux=num_aux,
        variable_ratio=total / num_vars,
        qubo_entries=qubo_entries,
        h_rows=rows,
        h_cols=cols,
        h_nnz=nnz,
        interconnection_ratio_dense=qubo_entries / dense if dense else float("inf"),
        interconnection_ratio_nnz=qubo_entries / nnz if nnz else float("inf"),
    )
