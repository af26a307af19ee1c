import numpy as np
import pytest

from hoim.model import (apply_flip, build_clause_system, clause_outputs,
                        delta_energy, random_spins, spin_input, spin_inputs)

from oracles import all_spin_states, energy_direct, random_term_list


def test_single_clause_construction():
    system = build_clause_system([({0, 1, 2}, 1.0)], 3)
    assert system.num_terms == 1
    assert system.num_spins == 3
    for i in range(3):
        assert system.spin_terms(i).tolist() == [0]
    assert system.column_weight_sum.tolist() == [1.0, 1.0, 1.0]


def test_duplicate_terms_cancel():
    system = build_clause_system([({0, 1}, 1.0), ({0, 1}, -1.0)], 2)
    assert system.num_terms == 0
    state = clause_outputs(system, [1, -1])
    assert state.energy == 0.0


def test_duplicate_terms_merge_to_one_row():
    system = build_clause_system([((0, 1), 1.0), ((1, 0), 2.5)], 2)
    assert system.num_terms == 1
    assert system.term_weight.tolist() == [3.5]


def test_column_weight_sum_hand_example():
    system = build_clause_system([({0}, 2.0), ({0, 1}, -1.0)], 2)
    assert system.column_weight_sum.tolist() == [1.0, -1.0]


def test_column_weight_sum_recomputable():
    rng = np.random.default_rng(5)
    terms = random_term_list(rng, 9, 14, 4)
    system = build_clause_system(terms, 9)
    for i in range(9):
        expected = sum(system.term_weight[k] for k in system.spin_terms(i))
        assert system.column_weight_sum[i] == pytest.approx(expected)


def test_build_errors():
    with pytest.raises(ValueError):
        build_clause_system([((), 1.0)], 3)
    with pytest.raises(IndexError):
        build_clause_system([((0, 3), 1.0)], 3)
    with pytest.raises(ValueError):
        build_clause_system([], 0)
    with pytest.raises(ValueError):
        build_clause_system([((0, 0, 1), 1.0)], 3)


def test_clause_outputs_examples():
    system = build_clause_system([({0, 1, 2}, 1.0)], 3)
    state = clause_outputs(system, [1, 1, -1])
    assert state.outputs.tolist() == [-1]
    assert state.energy == 1.0
    state = clause_outputs(system, [1, 1, 1])
    assert state.outputs.tolist() == [1]
    assert state.energy == -1.0


def test_clause_outputs_against_direct_evaluation():
    rng = np.random.default_rng(11)
    terms = random_term_list(rng, 8, 12, 5)
    system = build_clause_system(terms, 8)
    for _ in range(20):
        spins = random_spins(8, rng)
        state = clause_outputs(system, spins)
        assert state.energy == pytest.approx(energy_direct(terms, spins))


def test_delta_energy_examples():
    system = build_clause_system([({0, 1}, 1.0)], 3)
    state = clause_outputs(system, [1, 1, 1])
    assert delta_energy(system, state, 0) == 2.0
    assert delta_energy(system, state, 2) == 0.0  # spin absent from every term
    with pytest.raises(IndexError):
        delta_energy(system, state, 3)


def test_delta_energy_against_flip_recompute():
    rng = np.random.default_rng(23)
    terms = random_term_list(rng, 10, 15, 4)
    system = build_clause_system(terms, 10)
    for _ in range(10):
        spins = random_spins(10, rng)
        state = clause_outputs(system, spins)
        for i in range(10):
            flipped = spins.copy()
            flipped[i] = -flipped[i]
            expected = energy_direct(terms, flipped) - energy_direct(terms, spins)
            assert delta_energy(system, state, i) == pytest.approx(expected)


def test_apply_flip_example():
    system = build_clause_system([({0, 1, 2}, 1.0)], 3)
    spins = np.array([1, 1, 1], dtype=np.int8)
    state = clause_outputs(system, spins)
    apply_flip(system, state, spins, 0)
    assert state.outputs.tolist() == [-1]
    assert state.energy == 1.0
    assert spins.tolist() == [-1, 1, 1]


def test_apply_flip_involution():
    rng = np.random.default_rng(3)
    terms = random_term_list(rng, 7, 10, 3)
    system = build_clause_system(terms, 7)
    spins = random_spins(7, rng)
    state = clause_outputs(system, spins)
    before = (spins.copy(), state.outputs.copy(), state.energy)
    apply_flip(system, state, spins, 4)
    apply_flip(system, state, spins, 4)
    assert spins.tolist() == before[0].tolist()
    assert state.outputs.tolist() == before[1].tolist()
    assert state.energy == before[2]


def test_flip_sequence_matches_fresh_recompute():
    rng = np.random.default_rng(17)
    terms = random_term_list(rng, 12, 20, 5)
    system = build_clause_system(terms, 12)
    spins = random_spins(12, rng)
    state = clause_outputs(system, spins)
    for _ in range(50):
        apply_flip(system, state, spins, int(rng.integers(12)))
    fresh = clause_outputs(system, spins)
    assert state.outputs.tolist() == fresh.outputs.tolist()
    assert state.energy == fresh.energy  # integer weights: exact


def test_flip_touches_exactly_the_neighborhood():
    rng = np.random.default_rng(31)
    terms = random_term_list(rng, 9, 14, 4)
    system = build_clause_system(terms, 9)
    spins = random_spins(9, rng)
    state = clause_outputs(system, spins)
    for i in range(9):
        before = state.outputs.copy()
        apply_flip(system, state, spins, i)
        changed = np.flatnonzero(before != state.outputs)
        assert sorted(changed.tolist()) == sorted(system.spin_terms(i).tolist())
        apply_flip(system, state, spins, i)  # restore


def test_spin_input_identities():
    system = build_clause_system([({0, 1}, 1.0)], 2)
    state = clause_outputs(system, [1, 1])
    assert spin_input(system, state, 0) == 1.0

    rng = np.random.default_rng(41)
    terms = random_term_list(rng, 10, 16, 4)
    system = build_clause_system(terms, 10)
    spins = random_spins(10, rng)
    state = clause_outputs(system, spins)
    for i in range(10):
        assert spin_input(system, state, i) == pytest.approx(
            delta_energy(system, state, i) / 2.0)

    # binary clause-output reformulation: 2*(H~^T T^) - column_sum, T^ = (1+T)/2
    t_hat = (1 + state.outputs.astype(np.float64)) / 2.0
    weighted = np.zeros(10)
    for k in range(system.num_terms):
        for i in system.term_spins(k):
            weighted[i] += system.term_weight[k] * t_hat[k]
    binary_form = 2.0 * weighted - system.column_weight_sum
    assert np.allclose(binary_form, spin_inputs(system, state))


def test_float_weights_flagged():
    system = build_clause_system([({0, 1}, 0.5)], 2)
    assert not system.integral_weights
    system = build_clause_system([({0, 1}, 2.0)], 2)
    assert system.integral_weights


def test_degenerate_empty_system_energy_zero():
    system = build_clause_system([({0, 1}, 1.0), ({0, 1}, -1.0)], 4)
    state = clause_outputs(system, [1, -1, 1, -1])
    assert state.energy == 0.0
    assert spin_inputs(system, state).tolist() == [0.0] * 4


def test_ground_state_oracle_alignment():
    # exhaustive minimum is reachable by scanning all states through the model
    rng = np.random.default_rng(53)
    terms = random_term_list(rng, 6, 9, 3)
    system = build_clause_system(terms, 6)
    best_model = min(clause_outputs(system, s).energy for s in all_spin_states(6))
    best_oracle = min(energy_direct(terms, s) for s in all_spin_states(6))
    assert best_model == pytest.approx(best_oracle)
