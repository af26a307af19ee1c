"""Fowler-Nordheim annealing schedule and noisy acceptance thresholds.

The cooling law is ``tau(t) = tau0 / log(1 + t/C)`` sampled at
``t_n = 1 + n*delta``; it decays like ``1/log(n)``, the schedule for which
simulated annealing converges asymptotically.  Acceptance is realized as a
noisy threshold: a spin whose clause-input sum ``S_i`` satisfies
``S_i < -tau_n * log(u/B + eps)`` (``u`` uniform) fires, which is exactly
the Metropolis rule ``B * exp(-2*S_i/tau') > u`` with the factor 2 absorbed
into the temperature scale.  An optional Bernoulli blocker adds a large
amplitude ``A`` to the threshold of each spin independently so that, in
fully asynchronous operation, most spins are silenced each step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "AnnealSchedule",
    "NoiseSource",
    "b_from_mean_noise",
    "mean_noise_from_b",
    "temperature",
    "exponential_threshold",
    "bernoulli_blocker",
    "quantize_threshold",
    "autotune_amplitude",
    "default_quant_scale",
]

THRESHOLD_FORMS = ("methods", "pseudocode")


def b_from_mean_noise(mean: float, epsilon: float = 0.0) -> float:
    """Acceptance hyperparameter B giving E[log(u/B + eps)] ~= ``mean``.

    For small eps, E[log(u/B)] = -1 - log(B); the published configurations
    state the mean of the exponential noise rather than B itself.
    """
    if mean >= 0:
        raise ValueError("mean of the exponential noise must be negative")
    return math.exp(-1.0 - mean)


def mean_noise_from_b(b_param: float) -> float:
    return -1.0 - math.log(b_param)


@dataclass(frozen=True)
class AnnealSchedule:
    """Cooling and noise parameters for one annealed run.

    ``eta`` and ``amplitude_a`` only participate in the asynchronous
    (Bernoulli-blocked) mode: each spin is unblocked with probability
    ``eta`` per step, otherwise its threshold is raised by ``amplitude_a``.
    ``quantize_16bit`` emulates hardware noise paths that carry thresholds
    as signed 16-bit fixed point with step ``q_scale``.
    """

    tau0: float = 0.15625
    cap_c: float = 8.0e4
    delta: float = 2.0e-3
    b_param: float = 1.0
    epsilon: float = 1.0e-12
    eta: float | None = None
    amplitude_a: float | None = None
    quantize_16bit: bool = False
    q_scale: float | None = None
    threshold_form: str = "methods"
    seed: int | None = None

    def __post_init__(self):
        for name in ("tau0", "cap_c", "delta", "b_param", "epsilon"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.eta is not None and not 0.0 <= self.eta <= 1.0:
            raise ValueError("eta must lie in [0, 1]")
        if self.threshold_form not in THRESHOLD_FORMS:
            raise ValueError(f"threshold_form must be one of {THRESHOLD_FORMS}")
        if self.quantize_16bit and self.q_scale is not None and self.q_scale <= 0:
            raise ValueError("q_scale must be positive")
        if self.amplitude_a is not None:
            floor = self.tau0 * abs(math.log(self.epsilon))
            if self.amplitude_a <= floor:
                raise ValueError(
                    f"amplitude_a={self.amplitude_a} must exceed the step-0 "
                    f"exponential threshold scale tau0*|log(epsilon)|={floor:.6g}"
                )

    @classmethod
    def from_mean_noise(cls, mean_exp_noise: float, **kwargs) -> "AnnealSchedule":
        """Build a schedule specifying the mean of the exponential noise."""
        return cls(b_param=b_from_mean_noise(mean_exp_noise), **kwargs)

    def with_seed(self, seed: int) -> "AnnealSchedule":
        return replace(self, seed=seed)

    def effective_q_scale(self) -> float:
        if self.q_scale is not None:
            return self.q_scale
        return default_quant_scale(self)


@dataclass
class NoiseSource:
    """Deterministic uniform stream; equal seeds give bit-identical runs."""

    seed: int | None = None
    rng: np.random.Generator = field(init=False)

    def __post_init__(self):
        self.rng = np.random.default_rng(self.seed)

    def uniform(self) -> float:
        return float(self.rng.random())

    def uniforms(self, *shape) -> np.ndarray:
        return self.rng.random(shape)

    @classmethod
    def for_schedule(cls, schedule: AnnealSchedule) -> "NoiseSource":
        return cls(seed=schedule.seed)


def temperature(schedule: AnnealSchedule, step: int) -> float:
    """Discretized FN temperature ``tau0 / log(1 + (1 + step*delta)/C)``."""
    if step < 0:
        raise ValueError("step must be >= 0")
    t = 1.0 + step * schedule.delta
    return schedule.tau0 / math.log1p(t / schedule.cap_c)


def exponential_threshold(schedule: AnnealSchedule, step: int, noise: NoiseSource) -> float:
    """One annealed exponential-noise threshold ``tau_n * log(u/B + eps)``.

    Consumes exactly one uniform draw.  Under the pseudocode-compatible
    form the sign of the u-dependence flips: ``tau_n * log(B*u + eps)``.
    """
    u = noise.uniform()
    tau = temperature(schedule, step)
    if schedule.threshold_form == "pseudocode":
        return tau * math.log(schedule.b_param * u + schedule.epsilon)
    return tau * math.log(u / schedule.b_param + schedule.epsilon)


def bernoulli_blocker(schedule: AnnealSchedule, noise: NoiseSource) -> float:
    """Blocking amplitude: ``amplitude_a`` with probability ``1 - eta``, else 0."""
    if schedule.eta is None or schedule.amplitude_a is None:
        raise ValueError("bernoulli_blocker requires eta and amplitude_a (asynchronous mode)")
    u = noise.uniform()
    return schedule.amplitude_a if u < 1.0 - schedule.eta else 0.0


def quantize_threshold(value: float, scale: float) -> int:
    """Round ``value/scale`` to the nearest signed 16-bit integer, saturating."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    q = int(round(value / scale))
    return max(-32768, min(32767, q))


def default_quant_scale(schedule: AnnealSchedule) -> float:
    """Scale at which the largest step-0 threshold just fits in 16 bits."""
    return temperature(schedule, 0) * abs(math.log(schedule.epsilon)) / 32767.0


def autotune_amplitude(system, noise: NoiseSource, probe_iterations: int = 100,
                       margin: float = 1.25) -> float:
    """Pick an amplitude slightly above the largest |dE| seen on a short walk.

    Runs ``probe_iterations`` random flips from a random start, scanning all
    spins' energy deltas at each state, and returns the observed maximum
    magnitude times ``margin``.  Deterministic given the noise seed.
    """
    from .model import apply_flip, clause_outputs, random_spins, spin_inputs

    if probe_iterations < 1:
        raise ValueError("probe_iterations must be >= 1")
    if system.num_terms == 0 or system.num_spins == 0:
        raise ValueError("cannot autotune on an empty system")

    spins = random_spins(system.num_spins, noise.rng)
    state = clause_outputs(system, spins)
    max_abs = 0.0
    for _ in range(probe_iterations):
        deltas = 2.0 * spin_inputs(system, state)
        max_abs = max(max_abs, float(np.max(np.abs(deltas))))
        flip = int(noise.rng.integers(system.num_spins))
        apply_flip(system, state, spins, flip)
    return max_abs * margin
