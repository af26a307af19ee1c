"""Scikit-learn style front door for the annealed solvers.

``IsingAnnealer`` packages a mode, schedule and budget as estimator
parameters so runs compose with the usual ecosystem tooling
(``get_params``/``set_params``, ``clone``, joblib sweeps).  ``fit`` takes a
:class:`~hoim.model.ClauseSystem` and exposes the outcome as fitted
attributes.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .annealing import AnnealSchedule, NoiseSource, autotune_amplitude, b_from_mean_noise
from .coloring import conflict_graph, dsatur_color
from .model import ClauseSystem
from .solver import SolveBudget, solve_async_bernoulli, solve_colored, solve_uncolored

__all__ = ["IsingAnnealer", "MODES"]

MODES = ("uncolored", "colored", "async")


class IsingAnnealer(BaseEstimator):
    """Higher-order Ising solver with a fit/predict surface.

    Parameters mirror the annealing schedule plus the update mode and
    iteration budget.  ``mean_exp_noise`` overrides ``b_param`` when given
    (the published configurations specify the exponential noise mean).
    ``autotune_a`` probes the instance for its energy-delta scale ``A`` and
    re-derives ``tau0 = A / cap_c``.

    After ``fit``: ``best_spins_``, ``best_energy_``, ``best_step_``,
    ``n_steps_``, ``result_``, ``schedule_`` and (colored mode)
    ``coloring_``.
    """

    def __init__(self, mode="uncolored", tau0=0.15625, cap_c=8.0e4, delta=2.0e-3,
                 b_param=1.0, mean_exp_noise=None, epsilon=1.0e-12,
                 eta=None, amplitude_a=None, autotune_a=False,
                 quantize_16bit=False, q_scale=None, threshold_form="methods",
                 max_steps=1_000_000, target_energy=None,
                 trace_every=0, event_log=False, seed=None):
        self.mode = mode
        self.tau0 = tau0
        self.cap_c = cap_c
        self.delta = delta
        self.b_param = b_param
        self.mean_exp_noise = mean_exp_noise
        self.epsilon = epsilon
        self.eta = eta
        self.amplitude_a = amplitude_a
        self.autotune_a = autotune_a
        self.quantize_16bit = quantize_16bit
        self.q_scale = q_scale
        self.threshold_form = threshold_form
        self.max_steps = max_steps
        self.target_energy = target_energy
        self.trace_every = trace_every
        self.event_log = event_log
        self.seed = seed

    def _build_schedule(self, system: ClauseSystem) -> AnnealSchedule:
        tau0 = self.tau0
        amplitude = self.amplitude_a
        if self.autotune_a:
            probe = NoiseSource(seed=self.seed)
            amp = autotune_amplitude(system, probe)
            tau0 = amp / self.cap_c
            if self.mode == "async" and amplitude is None:
                amplitude = amp
        b = self.b_param if self.mean_exp_noise is None else b_from_mean_noise(self.mean_exp_noise)
        eta = self.eta
        if self.mode == "async" and eta is None:
            eta = 1.0 / max(system.num_spins, 1)
        return AnnealSchedule(
            tau0=tau0, cap_c=self.cap_c, delta=self.delta, b_param=b,
            epsilon=self.epsilon, eta=eta, amplitude_a=amplitude,
            quantize_16bit=self.quantize_16bit, q_scale=self.q_scale,
            threshold_form=self.threshold_form, seed=self.seed,
        )

    def fit(self, X: ClauseSystem, y=None, init_spins=None):
        """Run the annealer on a clause system.  Returns self."""
        if not isinstance(X, ClauseSystem):
            raise TypeError("IsingAnnealer.fit expects a ClauseSystem; "
                            "use the problems module to lower your instance")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        schedule = self._build_schedule(X)
        noise = NoiseSource(seed=self.seed)
        budget = SolveBudget(max_steps=int(self.max_steps),
                             target_energy=self.target_energy)
        kwargs = dict(trace_every=int(self.trace_every), event_log=bool(self.event_log))

        if self.mode == "colored":
            coloring = dsatur_color(conflict_graph(X))
            result = solve_colored(X, schedule, coloring, budget, noise,
                                   init=init_spins, **kwargs)
            self.coloring_ = coloring
        elif self.mode == "async":
            result = solve_async_bernoulli(X, schedule, budget, noise,
                                           init=init_spins, **kwargs)
        else:
            result = solve_uncolored(X, schedule, budget, noise,
                                     init=init_spins, **kwargs)

        self.schedule_ = schedule
        self.result_ = result
        self.best_spins_ = result.best_spins
        self.best_energy_ = result.best_energy
        self.best_step_ = result.best_step
        self.n_steps_ = result.steps_executed
        return self

    def fit_predict(self, X: ClauseSystem, y=None, init_spins=None) -> np.ndarray:
        """Run the annealer and return the best spin assignment found."""
        return self.fit(X, init_spins=init_spins).best_spins_

    def predict(self, X=None) -> np.ndarray:
        """Best spin assignment from the most recent ``fit``."""
        if not hasattr(self, "best_spins_"):
            raise RuntimeError("call fit before predict")
        return self.best_spins_
