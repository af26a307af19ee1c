import numpy as np
import pytest

from hoim.coloring import Coloring, conflict_graph, dsatur_color, validate_coloring
from hoim.model import apply_flip, build_clause_system, clause_outputs, random_spins
from hoim.problems import maxcut_to_ising, parse_gset
from hoim.solver import parity_toggle

from oracles import random_term_list


def test_conflict_graph_triangle():
    system = build_clause_system([({0, 1, 2}, 1.0)], 3)
    graph = conflict_graph(system)
    assert graph[0].tolist() == [1, 2]
    assert graph[1].tolist() == [0, 2]
    assert graph[2].tolist() == [0, 1]


def test_conflict_graph_disjoint_edges():
    system = build_clause_system([({0, 1}, 1.0), ({2, 3}, -2.0)], 4)
    graph = conflict_graph(system)
    assert graph[0].tolist() == [1]
    assert graph[2].tolist() == [3]


def test_maxcut_conflict_graph_is_the_input_graph():
    text = "4 4\n1 2 1\n2 3 1\n3 4 1\n4 1 1\n"
    graph = parse_gset(text)
    system = maxcut_to_ising(graph)
    adj = conflict_graph(system)
    expected = {0: [1, 3], 1: [0, 2], 2: [1, 3], 3: [0, 2]}
    for v, neighbors in expected.items():
        assert adj[v].tolist() == neighbors


def test_dsatur_triangle_and_path():
    triangle = build_clause_system([({0, 1}, 1.0), ({1, 2}, 1.0), ({0, 2}, 1.0)], 3)
    assert dsatur_color(conflict_graph(triangle)).num_colors == 3
    path = build_clause_system([({0, 1}, 1.0), ({1, 2}, 1.0)], 3)
    assert dsatur_color(conflict_graph(path)).num_colors == 2


def test_dsatur_proper_and_bounded_on_random_instances():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(4, 40))
        terms = random_term_list(rng, n, int(rng.integers(3, 2 * n)), 4)
        system = build_clause_system(terms, n)
        graph = conflict_graph(system)
        coloring = dsatur_color(graph)
        assert validate_coloring(system, coloring)
        max_degree = max(g.size for g in graph)
        assert coloring.num_colors <= max_degree + 1
        for v in range(n):
            for w in graph[v]:
                assert coloring.spin_color[v] != coloring.spin_color[w]


def test_dsatur_deterministic():
    rng = np.random.default_rng(21)
    terms = random_term_list(rng, 20, 30, 3)
    system = build_clause_system(terms, 20)
    graph = conflict_graph(system)
    a = dsatur_color(graph)
    b = dsatur_color(graph)
    assert np.array_equal(a.spin_color, b.spin_color)


def test_validate_coloring_against_bad_partitions():
    system = build_clause_system([({0, 1}, 1.0)], 2)
    all_one = Coloring(groups=(np.array([0, 1]),), spin_color=np.array([0, 0]))
    assert not validate_coloring(system, all_one)
    proper = dsatur_color(conflict_graph(system))
    assert validate_coloring(system, proper)
    # missing spin
    partial = Coloring(groups=(np.array([0]),), spin_color=np.array([0, -1]))
    assert not validate_coloring(system, partial)


def test_validity_is_label_invariant():
    rng = np.random.default_rng(3)
    terms = random_term_list(rng, 12, 18, 3)
    system = build_clause_system(terms, 12)
    coloring = dsatur_color(conflict_graph(system))
    perm = rng.permutation(coloring.num_colors)
    groups = tuple(coloring.groups[r] for r in perm)
    spin_color = np.empty_like(coloring.spin_color)
    for new_label, group in enumerate(groups):
        spin_color[group] = new_label
    assert validate_coloring(system, Coloring(groups=groups, spin_color=spin_color))


def test_parallel_group_update_equals_any_serial_order():
    rng = np.random.default_rng(13)
    for _ in range(25):
        n = int(rng.integers(5, 25))
        terms = random_term_list(rng, n, int(rng.integers(4, 2 * n)), 4)
        system = build_clause_system(terms, n)
        coloring = dsatur_color(conflict_graph(system))
        group = max(coloring.groups, key=lambda g: g.size)
        size = int(rng.integers(1, group.size + 1))
        fired = rng.choice(group, size=size, replace=False)

        spins0 = random_spins(n, rng)
        state_par = clause_outputs(system, spins0)
        spins_par = spins0.copy()
        parity_toggle(system, fired, state_par, spins_par)

        for _ in range(3):  # several serial orders all agree
            order = rng.permutation(fired)
            state_seq = clause_outputs(system, spins0)
            spins_seq = spins0.copy()
            for v in order:
                apply_flip(system, state_seq, spins_seq, int(v))
            assert spins_seq.tolist() == spins_par.tolist()
            assert state_seq.outputs.tolist() == state_par.outputs.tolist()
            assert state_seq.energy == state_par.energy
