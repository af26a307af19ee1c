"""Annealed search loops: rejection-free, graph-colored, and asynchronous.

All three solvers share the same latent/toggle dynamics: every spin
integrates its clause outputs into ``S_i``, fires when ``S_i`` drops below
a noisy annealed threshold, and firing toggles the outputs of the clauses
it belongs to (odd parity per clause).  They differ in who may fire per
iteration:

* ``solve_uncolored`` draws one threshold per spin per iteration, then an
  arbiter picks one firing spin uniformly among those over threshold
  (rejection-free sampling).
* ``solve_colored`` cycles the color groups; all over-threshold spins of
  the current group fire together (conflict-free by the coloring).
* ``solve_async_bernoulli`` gives every spin a shared exponential
  threshold plus an independent Bernoulli blocking term; all unblocked
  spins over threshold fire, with clause updates resolved by parity.

Runs are deterministic per seed: uniforms are consumed from the run's
:class:`~hoim.annealing.NoiseSource` in fixed-size blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .annealing import AnnealSchedule, NoiseSource
from .coloring import Coloring, validate_coloring
from .model import (ClauseState, ClauseSystem, apply_flip, clause_outputs,
                    random_spins, spin_inputs)
from .validation import as_spin_vector

__all__ = [
    "SolveBudget",
    "RunResult",
    "latent_fire_mask",
    "arbiter_select",
    "parity_toggle",
    "solve_uncolored",
    "solve_colored",
    "solve_async_bernoulli",
]

CHUNK_STEPS = 4096
CHUNK_STEPS_LOGGED = 512  # smaller chunks keep event buffers bounded


@dataclass(frozen=True)
class SolveBudget:
    """Iteration cap plus optional early-stop energy target."""

    max_steps: int
    target_energy: float | None = None

    def __post_init__(self):
        if self.max_steps < 0:
            raise ValueError("max_steps must be >= 0")


@dataclass
class RunResult:
    """Outcome of one annealed run."""

    best_energy: float
    best_spins: np.ndarray
    best_step: int
    steps_executed: int
    event_log: np.ndarray | None = None       # (n_events, 2): step, spin
    objective_trace: np.ndarray | None = None  # (n_points, 2): step, energy


def latent_fire_mask(system: ClauseSystem, state: ClauseState, thresholds) -> np.ndarray:
    """Spins whose input sum is below the negated threshold: ``S_i < -mu_i``."""
    mu = np.asarray(thresholds, dtype=np.float64)
    if mu.shape != (system.num_spins,):
        raise ValueError(f"expected {system.num_spins} thresholds, got shape {mu.shape}")
    s = spin_inputs(system, state)
    return np.flatnonzero(s < -mu)


def arbiter_select(active, noise: NoiseSource):
    """Uniform pick from ``active`` (one draw); ``None`` when empty."""
    idx = np.sort(np.asarray(list(active), dtype=np.int64))
    if idx.size == 0:
        return None
    pick = min(int(noise.uniform() * idx.size), idx.size - 1)
    return int(idx[pick])


def parity_toggle(system: ClauseSystem, fired, state: ClauseState, spins: np.ndarray) -> None:
    """Fire a set of spins at once: clause outputs toggle on odd parity.

    Equivalent to applying the individual flips when no clause contains two
    fired spins; the mod-2 rule also covers simultaneous firings inside one
    clause (asynchronous mode).
    """
    fired_idx = np.asarray(sorted(set(int(i) for i in fired)), dtype=np.int64)
    if fired_idx.size == 0:
        return
    if np.any(fired_idx < 0) or np.any(fired_idx >= system.num_spins):
        raise IndexError("fired spin index out of range")
    counts = np.zeros(system.num_terms, dtype=np.int64)
    for i in fired_idx:
        rows = system.spin_terms(int(i))
        np.add.at(counts, rows, 1)
    toggled = np.flatnonzero(counts % 2 == 1)
    de = 2.0 * float(np.dot(system.term_weight[toggled],
                            state.outputs[toggled].astype(np.float64)))
    state.outputs[toggled] = -state.outputs[toggled]
    state.energy += de
    spins[fired_idx] = -spins[fired_idx]


def _prepare(system: ClauseSystem, schedule: AnnealSchedule, noise: NoiseSource, init):
    if init is None:
        spins = random_spins(system.num_spins, noise.rng)
    else:
        spins = as_spin_vector(init, system.num_spins)
    state = clause_outputs(system, spins)
    s_in = spin_inputs(system, state)
    return spins, state, s_in


def _schedule_params(schedule: AnnealSchedule):
    pseudo = schedule.threshold_form == "pseudocode"
    quant = bool(schedule.quantize_16bit)
    qscale = schedule.effective_q_scale() if quant else 1.0
    return pseudo, quant, qscale



def _log_noise(u: np.ndarray, schedule: AnnealSchedule, pseudo: bool) -> np.ndarray:
    """Vectorized log of the exponential noise; the kernels scale it by tau."""
    if pseudo:
        return np.log(schedule.b_param * u + schedule.epsilon)
    return np.log(u / schedule.b_param + schedule.epsilon)

def _finish(best_energy, best_spins, best_step, steps, events, traces) -> RunResult:
    event_log = None
    if events is not None:
        event_log = (np.concatenate(events, axis=0) if events
                     else np.empty((0, 2), dtype=np.int64))
    trace = None
    if traces is not None:
        trace = (np.concatenate(traces, axis=0) if traces
                 else np.empty((0, 2), dtype=np.float64))
    return RunResult(
        best_energy=float(best_energy),
        best_spins=best_spins,
        best_step=int(best_step),
        steps_executed=int(steps),
        event_log=event_log,
        objective_trace=trace,
    )


def _trivial_result(state, spins, trace_every, event_log):
    events = [] if event_log else None
    traces = [] if trace_every > 0 else None
    return _finish(state.energy, spins.copy(), 0, 0, events, traces)


def solve_uncolored(system: ClauseSystem, schedule: AnnealSchedule,
                    budget: SolveBudget, noise: NoiseSource, init=None,
                    trace_every: int = 0, event_log: bool = False) -> RunResult:
    """Rejection-free annealed search (one flip per iteration)."""
    spins, state, s_in = _prepare(system, schedule, noise, init)
    target = budget.target_energy
    if (system.num_terms == 0 or budget.max_steps == 0
            or (target is not None and state.energy <= target)):
        return _trivial_result(state, spins, trace_every, event_log)

    pseudo, quant, qscale = _schedule_params(schedule)
    n = system.num_spins
    chunk = CHUNK_STEPS_LOGGED if event_log else CHUNK_STEPS
    active_buf = np.empty(n, dtype=np.int64)
    best_spins = spins.copy()
    energy = state.energy
    best_energy = energy
    best_step = 0
    step = 0
    events = [] if event_log else None
    traces = [] if trace_every > 0 else None

    while step < budget.max_steps:
        nsteps = min(chunk, budget.max_steps - step)
        lnoise = _log_noise(noise.rng.random((nsteps, n)), schedule, pseudo)
        upick = noise.rng.random(nsteps)
        tr_cap = (nsteps // trace_every + 1) if trace_every > 0 else 1
        trace_steps = np.empty(tr_cap, dtype=np.float64)
        trace_vals = np.empty(tr_cap, dtype=np.float64)
        ev_cap = nsteps if event_log else 1
        ev_steps = np.empty(ev_cap, dtype=np.int64)
        ev_spins = np.empty(ev_cap, dtype=np.int64)

        done, energy, best_energy, best_step, hit, n_ev, n_tr = kernels.run_uncolored_chunk(
            system.term_ptr, system.term_cols, system.spin_ptr, system.spin_rows,
            system.term_weight, spins, state.outputs, s_in, best_spins,
            energy, best_energy, best_step,
            step, nsteps, lnoise, upick,
            schedule.tau0, schedule.cap_c, schedule.delta,
            pseudo, quant, qscale,
            target is not None, target if target is not None else 0.0,
            trace_every, trace_steps, trace_vals,
            event_log, ev_steps, ev_spins,
            active_buf,
        )
        step += done
        if events is not None and n_ev:
            events.append(np.column_stack([ev_steps[:n_ev], ev_spins[:n_ev]]))
        if traces is not None and n_tr:
            traces.append(np.column_stack([trace_steps[:n_tr], trace_vals[:n_tr]]))
        if hit:
            break
    state.energy = energy
    return _finish(best_energy, best_spins, best_step, step, events, traces)


def solve_colored(system: ClauseSystem, schedule: AnnealSchedule, coloring: Coloring,
                  budget: SolveBudget, noise: NoiseSource, init=None,
                  trace_every: int = 0, event_log: bool = False) -> RunResult:
    """Graph-colored parallel search (one color group per iteration)."""
    if not validate_coloring(system, coloring):
        raise ValueError("invalid coloring for this system")
    spins, state, s_in = _prepare(system, schedule, noise, init)
    target = budget.target_energy
    if (system.num_terms == 0 or budget.max_steps == 0
            or (target is not None and state.energy <= target)):
        return _trivial_result(state, spins, trace_every, event_log)

    pseudo, quant, qscale = _schedule_params(schedule)
    groups = coloring.groups
    group_ptr = np.zeros(len(groups) + 1, dtype=np.int64)
    for r, g in enumerate(groups):
        group_ptr[r + 1] = group_ptr[r] + g.size
    group_members = np.concatenate(groups).astype(np.int64) if groups else np.empty(0, np.int64)
    max_group = int(max(g.size for g in groups))

    chunk = CHUNK_STEPS_LOGGED if event_log else CHUNK_STEPS
    fired_buf = np.empty(max_group, dtype=np.int64)
    best_spins = spins.copy()
    energy = state.energy
    best_energy = energy
    best_step = 0
    step = 0
    group_cursor = 0
    events = [] if event_log else None
    traces = [] if trace_every > 0 else None

    while step < budget.max_steps:
        nsteps = min(chunk, budget.max_steps - step)
        lnoise = _log_noise(noise.rng.random((nsteps, max_group)), schedule, pseudo)
        tr_cap = (nsteps // trace_every + 1) if trace_every > 0 else 1
        trace_steps = np.empty(tr_cap, dtype=np.float64)
        trace_vals = np.empty(tr_cap, dtype=np.float64)
        ev_cap = nsteps * max_group if event_log else 1
        ev_steps = np.empty(ev_cap, dtype=np.int64)
        ev_spins = np.empty(ev_cap, dtype=np.int64)

        (done, energy, best_energy, best_step, hit, n_ev, n_tr,
         group_cursor) = kernels.run_colored_chunk(
            system.term_ptr, system.term_cols, system.spin_ptr, system.spin_rows,
            system.term_weight, group_ptr, group_members,
            spins, state.outputs, s_in, best_spins,
            energy, best_energy, best_step,
            step, group_cursor, nsteps, lnoise,
            schedule.tau0, schedule.cap_c, schedule.delta,
            pseudo, quant, qscale,
            target is not None, target if target is not None else 0.0,
            trace_every, trace_steps, trace_vals,
            event_log, ev_steps, ev_spins,
            fired_buf,
        )
        step += done
        if events is not None and n_ev:
            events.append(np.column_stack([ev_steps[:n_ev], ev_spins[:n_ev]]))
        if traces is not None and n_tr:
            traces.append(np.column_stack([trace_steps[:n_tr], trace_vals[:n_tr]]))
        if hit:
            break
    state.energy = energy
    return _finish(best_energy, best_spins, best_step, step, events, traces)


def solve_async_bernoulli(system: ClauseSystem, schedule: AnnealSchedule,
                          budget: SolveBudget, noise: NoiseSource, init=None,
                          trace_every: int = 0, event_log: bool = False) -> RunResult:
    """Asynchronous mode: Bernoulli-blocked simultaneous firing.

    Per iteration, one shared exponential threshold is drawn plus one
    Bernoulli blocker per spin (unblocked with probability ``eta``); every
    unblocked spin under threshold fires, and clause outputs follow the
    mod-2 parity of fired member spins.
    """
    if schedule.amplitude_a is None:
        raise ValueError("asynchronous mode requires amplitude_a")
    if schedule.threshold_form == "pseudocode":
        raise ValueError("asynchronous mode supports only the methods threshold form")
    eta = schedule.eta if schedule.eta is not None else 1.0 / max(system.num_spins, 1)

    spins, state, s_in = _prepare(system, schedule, noise, init)
    target = budget.target_energy
    if (system.num_terms == 0 or budget.max_steps == 0
            or (target is not None and state.energy <= target)):
        return _trivial_result(state, spins, trace_every, event_log)

    _, quant, qscale = _schedule_params(schedule)
    n = system.num_spins
    chunk = CHUNK_STEPS_LOGGED if event_log else CHUNK_STEPS
    fired_buf = np.empty(n, dtype=np.int64)
    clause_parity = np.zeros(system.num_terms, dtype=np.int64)
    touched_buf = np.empty(system.num_terms, dtype=np.int64)
    best_spins = spins.copy()
    energy = state.energy
    best_energy = energy
    best_step = 0
    step = 0
    events = [] if event_log else None
    traces = [] if trace_every > 0 else None

    while step < budget.max_steps:
        nsteps = min(chunk, budget.max_steps - step)
        u = noise.rng.random((nsteps, n + 1))
        lnoise = _log_noise(u[:, 0].copy(), schedule, pseudo=False)
        ubern = np.ascontiguousarray(u[:, 1:])
        tr_cap = (nsteps // trace_every + 1) if trace_every > 0 else 1
        trace_steps = np.empty(tr_cap, dtype=np.float64)
        trace_vals = np.empty(tr_cap, dtype=np.float64)
        ev_cap = nsteps * n if event_log else 1
        ev_steps = np.empty(ev_cap, dtype=np.int64)
        ev_spins = np.empty(ev_cap, dtype=np.int64)

        done, energy, best_energy, best_step, hit, n_ev, n_tr = kernels.run_async_chunk(
            system.term_ptr, system.term_cols, system.spin_ptr, system.spin_rows,
            system.term_weight, spins, state.outputs, s_in, best_spins,
            energy, best_energy, best_step,
            step, nsteps, lnoise, ubern,
            schedule.tau0, schedule.cap_c, schedule.delta,
            quant, qscale, eta, schedule.amplitude_a,
            target is not None, target if target is not None else 0.0,
            trace_every, trace_steps, trace_vals,
            event_log, ev_steps, ev_spins,
            fired_buf, clause_parity, touched_buf,
        )
        step += done
        if events is not None and n_ev:
            events.append(np.column_stack([ev_steps[:n_ev], ev_spins[:n_ev]]))
        if traces is not None and n_tr:
            traces.append(np.column_stack([trace_steps[:n_tr], trace_vals[:n_tr]]))
        if hit:
            break
    state.energy = energy
    return _finish(best_energy, best_spins, best_step, step, events, traces)
