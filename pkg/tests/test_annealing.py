import math

import numpy as np
import pytest

from hoim.annealing import (AnnealSchedule, NoiseSource, autotune_amplitude,
                            b_from_mean_noise, bernoulli_blocker,
                            default_quant_scale, exponential_threshold,
                            mean_noise_from_b, quantize_threshold, temperature)
from hoim.model import build_clause_system, clause_outputs, random_spins

from oracles import energy_direct, random_term_list

FIG3 = dict(tau0=0.15625, cap_c=8.0e4, delta=2.0e-3)


class FixedNoise:
    """Noise stub replaying a scripted uniform sequence."""

    def __init__(self, values):
        self.values = list(values)

    def uniform(self):
        return self.values.pop(0)


def test_temperature_at_step_zero():
    schedule = AnnealSchedule(**FIG3)
    expected = 0.15625 / math.log1p(1.0 / 8.0e4)
    assert temperature(schedule, 0) == pytest.approx(expected)
    assert expected == pytest.approx(1.25001e4, rel=1e-4)


def test_temperature_strictly_decreasing():
    schedule = AnnealSchedule(**FIG3)
    steps = [0, 1, 5, 100, 10_000, 10_000_000]
    taus = [temperature(schedule, s) for s in steps]
    assert all(a > b for a, b in zip(taus, taus[1:]))
    assert all(tau > 0 for tau in taus)


def test_schedule_algebraic_identity():
    schedule = AnnealSchedule(**FIG3)
    for step in [0, 3, 999, 123_456, 10**8]:
        t = 1.0 + step * schedule.delta
        product = temperature(schedule, step) * math.log1p(t / schedule.cap_c)
        assert product == pytest.approx(schedule.tau0, rel=1e-12)


def test_schedule_validation():
    with pytest.raises(ValueError):
        AnnealSchedule(tau0=0.0)
    with pytest.raises(ValueError):
        AnnealSchedule(delta=-1.0)
    with pytest.raises(ValueError):
        AnnealSchedule(eta=1.5)
    with pytest.raises(ValueError):
        AnnealSchedule(threshold_form="other")
    # blocking amplitude must clear the step-0 exponential threshold scale
    floor = 0.15625 * abs(math.log(1e-12))
    with pytest.raises(ValueError):
        AnnealSchedule(**FIG3, eta=0.5, amplitude_a=floor * 0.5)
    AnnealSchedule(**FIG3, eta=0.5, amplitude_a=floor * 2)


def test_exponential_threshold_boundary_draw():
    schedule = AnnealSchedule(**FIG3, b_param=2.0, epsilon=1e-6)
    u = schedule.b_param * (1.0 - schedule.epsilon)
    mu = exponential_threshold(schedule, 0, FixedNoise([u]))
    assert mu == pytest.approx(0.0, abs=1e-12)


def test_exponential_threshold_consumes_one_draw():
    schedule = AnnealSchedule(**FIG3)
    noise = NoiseSource(seed=0)
    expected_u = np.random.default_rng(0).random()
    mu = exponential_threshold(schedule, 7, noise)
    tau = temperature(schedule, 7)
    assert mu == pytest.approx(tau * math.log(expected_u / 1.0 + 1e-12))


def test_exponential_law_unit_mean():
    # with B = 1 and tiny epsilon, -mu/tau is Exp(1)
    schedule = AnnealSchedule(**FIG3, b_param=1.0)
    noise = NoiseSource(seed=123)
    tau = temperature(schedule, 0)
    draws = np.array([exponential_threshold(schedule, 0, noise) for _ in range(100_000)])
    assert np.mean(-draws / tau) == pytest.approx(1.0, abs=0.02)


def test_mean_noise_knob():
    # paper-style configuration states the mean of log(u/B) directly
    b = b_from_mean_noise(-0.083703)
    assert mean_noise_from_b(b) == pytest.approx(-0.083703)
    rng = np.random.default_rng(7)
    samples = np.log(rng.random(200_000) / b)
    assert samples.mean() == pytest.approx(-0.083703, abs=0.02)
    assert b_from_mean_noise(-1.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        b_from_mean_noise(0.5)


def test_threshold_sign_bound_for_b_at_least_one():
    schedule = AnnealSchedule(**FIG3, b_param=1.0, epsilon=1e-9)
    noise = NoiseSource(seed=3)
    tau = temperature(schedule, 0)
    bound = tau * math.log(1.0 + schedule.epsilon)
    for _ in range(10_000):
        assert exponential_threshold(schedule, 0, noise) <= bound + 1e-15


def test_pseudocode_form_flips_u_dependence():
    schedule = AnnealSchedule(**FIG3, b_param=1.0, threshold_form="pseudocode")
    tau = temperature(schedule, 0)
    mu = exponential_threshold(schedule, 0, FixedNoise([0.5]))
    assert mu == pytest.approx(tau * math.log(1.0 * 0.5 + schedule.epsilon))


def test_bernoulli_blocker_degenerate_etas():
    amp = 100.0
    always_off = AnnealSchedule(**FIG3, eta=1.0, amplitude_a=amp)
    always_on = AnnealSchedule(**FIG3, eta=0.0, amplitude_a=amp)
    noise = NoiseSource(seed=5)
    for _ in range(100):
        assert bernoulli_blocker(always_off, noise) == 0.0
        assert bernoulli_blocker(always_on, noise) == amp


def test_bernoulli_frequency():
    schedule = AnnealSchedule(**FIG3, eta=0.5, amplitude_a=100.0)
    noise = NoiseSource(seed=11)
    hits = sum(bernoulli_blocker(schedule, noise) == 100.0 for _ in range(100_000))
    assert hits / 100_000 == pytest.approx(0.5, abs=0.01)


def test_bernoulli_requires_async_configuration():
    schedule = AnnealSchedule(**FIG3)
    with pytest.raises(ValueError):
        bernoulli_blocker(schedule, NoiseSource(seed=0))


def test_quantize_threshold():
    assert quantize_threshold(0.0, 0.5) == 0
    assert quantize_threshold(-1e9, 0.5) == -32768
    assert quantize_threshold(1e9, 0.5) == 32767
    rng = np.random.default_rng(13)
    scale = 1e-3
    for value in rng.uniform(-30.0, 30.0, 1000):
        q = quantize_threshold(value, scale)
        assert abs(q * scale - value) <= scale / 2 + 1e-12
        if abs(value) > scale:  # sign preserved away from the rounding cell
            assert np.sign(q) == np.sign(value)
    with pytest.raises(ValueError):
        quantize_threshold(1.0, 0.0)


def test_default_quant_scale_fits_step_zero():
    schedule = AnnealSchedule(**FIG3)
    scale = default_quant_scale(schedule)
    largest = temperature(schedule, 0) * abs(math.log(schedule.epsilon))
    assert quantize_threshold(-largest, scale) >= -32768
    assert abs(largest / scale) <= 32768


def test_noise_reproducibility():
    a = NoiseSource(seed=99)
    b = NoiseSource(seed=99)
    assert [a.uniform() for _ in range(50)] == [b.uniform() for _ in range(50)]
    assert np.array_equal(NoiseSource(seed=1).uniforms(4, 3),
                          NoiseSource(seed=1).uniforms(4, 3))


def test_autotune_single_clause():
    system = build_clause_system([({0, 1}, 1.0)], 2)
    amp = autotune_amplitude(system, NoiseSource(seed=1), probe_iterations=10)
    assert amp == pytest.approx(2.0 * 1.25)


def test_autotune_bounds_probe_trajectory():
    rng = np.random.default_rng(19)
    terms = random_term_list(rng, 12, 18, 3)
    system = build_clause_system(terms, 12)
    seed, iters = 77, 50
    amp = autotune_amplitude(system, NoiseSource(seed=seed), probe_iterations=iters)

    # independent replay of the probe: same draw order, deltas by brute force
    replay = NoiseSource(seed=seed)
    spins = random_spins(12, replay.rng)
    max_abs = 0.0
    for _ in range(iters):
        base = energy_direct(terms, spins)
        for i in range(12):
            flipped = spins.copy()
            flipped[i] = -flipped[i]
            max_abs = max(max_abs, abs(energy_direct(terms, flipped) - base))
        spins[int(replay.rng.integers(12))] *= -1
    assert amp == pytest.approx(1.25 * max_abs)

    with pytest.raises(ValueError):
        autotune_amplitude(system, NoiseSource(seed=0), probe_iterations=0)
    empty = build_clause_system([({0}, 1.0), ({0}, -1.0)], 2)
    with pytest.raises(ValueError):
        autotune_amplitude(empty, NoiseSource(seed=0))
