import numpy as np
import pytest

from hoim.baseline import extend_initial_spins, lower_qubo
from hoim.model import clause_outputs
from hoim.problems import QuboSystem, parse_dimacs_cnf, quadratize_cnf3

from conftest import DATA_DIR


def test_lower_single_pairwise():
    qubo = QuboSystem(num_spins=2, num_vars=2, pairwise=((0, 1, 1.0),), linear=())
    system = lower_qubo(qubo)
    assert system.num_terms == 1
    assert system.term_spins(0).tolist() == [0, 1]
    assert system.max_order == 2


def test_lowered_energy_is_negated_bilinear_form():
    rng = np.random.default_rng(7)
    n = 8
    pairs = tuple((i, j, float(rng.normal()))
                  for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5)
    lin = tuple((i, float(rng.normal())) for i in range(n) if rng.random() < 0.7)
    qubo = QuboSystem(num_spins=n, num_vars=n, pairwise=pairs, linear=lin)
    system = lower_qubo(qubo)

    # dense reference: H(s) = 1/2 s^T Q s + h^T s with symmetric Q
    q_mat = np.zeros((n, n))
    for i, j, q in pairs:
        q_mat[i, j] += q
        q_mat[j, i] += q
    h_vec = np.zeros(n)
    for i, h in lin:
        h_vec[i] += h
    for _ in range(100):
        spins = (rng.integers(0, 2, n) * 2 - 1).astype(np.float64)
        reference = 0.5 * spins @ q_mat @ spins + h_vec @ spins
        energy = clause_outputs(system, spins.astype(np.int8)).energy
        assert energy == pytest.approx(-reference)


def test_lowered_quadratized_cnf_counts():
    cnf = parse_dimacs_cnf((DATA_DIR / "rand3sat-20-91.s1.cnf").read_text())
    system = lower_qubo(quadratize_cnf3(cnf))
    assert system.num_spins == 111
    assert system.max_order == 2


def test_extend_initial_spins_prefix():
    rng = np.random.default_rng(3)
    init = (rng.integers(0, 2, 5) * 2 - 1).astype(np.int8)
    extended = extend_initial_spins(init, 9, rng)
    assert extended[:5].tolist() == init.tolist()
    assert np.all(np.abs(extended) == 1)
    with pytest.raises(ValueError):
        extend_initial_spins(init, 3, rng)
