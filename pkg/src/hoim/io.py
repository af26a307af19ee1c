"""File formats: DIMACS CNF and Gset readers, 3R-3X and QUBO JSON."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .model import build_clause_system, clause_outputs
from .problems import (CnfFormula, PlantedInstance, QuboSystem, WeightedGraph,
                       parse_dimacs_cnf, parse_gset)

__all__ = [
    "read_cnf_file",
    "read_gset_file",
    "write_planted_json",
    "read_planted_json",
    "write_qubo_json",
]

SCHEMA_VERSION = 1


def read_cnf_file(path) -> CnfFormula:
    return parse_dimacs_cnf(Path(path).read_text())


def read_gset_file(path) -> WeightedGraph:
    return parse_gset(Path(path).read_text())


def write_planted_json(instance: PlantedInstance, path) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "3r3x",
        "num_vars": int(instance.system.num_spins),
        "clauses": instance.clause_vars.tolist(),
        "rhs_bits": instance.rhs_bits.tolist(),
        "planted_assignment": ((1 - instance.planted_spins) // 2).tolist(),
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def read_planted_json(path) -> PlantedInstance:
    payload = json.loads(Path(path).read_text())
    if payload.get("kind") != "3r3x":
        raise ValueError(f"{path} is not a 3r3x instance file")
    clauses = np.asarray(payload["clauses"], dtype=np.int64)
    rhs = np.asarray(payload["rhs_bits"], dtype=np.int8)
    num_vars = int(payload["num_vars"])
    weights = np.where(rhs == 0, 1.0, -1.0)
    system = build_clause_system(
        [(tuple(row), w) for row, w in zip(clauses.tolist(), weights)], num_vars
    )
    assignment = np.asarray(payload["planted_assignment"], dtype=np.int64)
    planted = (1 - 2 * assignment).astype(np.int8)
    state = clause_outputs(system, planted)
    if state.energy != -float(system.num_terms):
        raise ValueError(f"{path}: planted assignment does not satisfy the system")
    return PlantedInstance(system=system, planted_spins=planted,
                           rhs_bits=rhs, clause_vars=clauses)


def write_qubo_json(qubo: QuboSystem, path) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "qubo",
        "num_spins": int(qubo.num_spins),
        "num_vars": int(qubo.num_vars),
        "linear": [[int(i), float(h)] for i, h in qubo.linear],
        "pairwise": [[int(i), int(j), float(q)] for i, j, q in qubo.pairwise],
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")
