"""Multi-trial campaigns and time-to-solution statistics.

TTS follows the standard 99%-confidence convention
``TTS = T_comp * log(1 - 0.99) / log(1 - P_S)`` with ``TTS = T_comp``
when ``P_S > 0.99``; for target-quality experiments, runs that miss the
target are assigned the iteration cap before taking the median.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .annealing import AnnealSchedule, NoiseSource, autotune_amplitude, b_from_mean_noise
from .baseline import extend_initial_spins, lower_qubo
from .coloring import Coloring, conflict_graph, dsatur_color
from .io import read_cnf_file, read_gset_file, read_planted_json
from .model import ClauseSystem, random_spins
from .problems import (CnfFormula, CnfIsingMeta, PlantedInstance, WeightedGraph,
                       cnf_to_ising, cut_value, gen_3r3x, maxcut_to_ising,
                       quadratize_3r3x, quadratize_cnf3, satisfied_count)
from .solver import SolveBudget, solve_async_bernoulli, solve_colored, solve_uncolored

__all__ = [
    "tts",
    "median_tts_capped",
    "TrialRecord",
    "TrialStats",
    "CampaignConfig",
    "ProblemBundle",
    "load_problem",
    "trial_seed",
    "run_campaign",
]

SCHEMA_VERSION = 1
CAMPAIGN_MODES = ("uncolored", "colored", "async", "second-order")


def tts(success_prob: float, t_comp: float) -> float:
    """Time to reach the target with 99% confidence."""
    if not 0.0 <= success_prob <= 1.0:
        raise ValueError("success_prob must lie in [0, 1]")
    if t_comp <= 0:
        raise ValueError("t_comp must be positive")
    if success_prob == 0.0:
        return math.inf
    if success_prob > 0.99:
        return float(t_comp)
    return float(t_comp) * math.log(1.0 - 0.99) / math.log(1.0 - success_prob)


def median_tts_capped(per_trial, cap: float) -> float:
    """Median per-trial time with failures replaced by ``cap``.

    ``per_trial`` holds numbers for successful runs and ``None`` for
    failures.  For an even count the lower of the two middle values is
    returned.
    """
    values = [cap if v is None else v for v in per_trial]
    if not values:
        raise ValueError("per_trial must be non-empty")
    values.sort()
    return float(values[(len(values) - 1) // 2])


@dataclass
class TrialRecord:
    seed: int
    best_objective: float
    best_energy: float
    steps: int
    success: bool
    wall_time_s: float


@dataclass
class TrialStats:
    trials: int
    successes: int
    success_prob: float | None
    per_trial: list[TrialRecord]
    tts_iterations: float | None
    tts_seconds: float | None
    median_tts_capped: float | None


@dataclass
class CampaignConfig:
    """Flat campaign description; every key maps to a CLI flag."""

    problem: str
    mode: str = "uncolored"
    vars: int | None = None           # 3r3x generation size
    instance_seed: int = 0            # 3r3x generation seed
    tau0: float = 0.15625
    cap_c: float = 8.0e4
    delta: float = 2.0e-3
    b_param: float = 1.0
    mean_exp_noise: float | None = None
    epsilon: float = 1.0e-12
    eta: float | None = None
    amplitude_a: float | None = None
    autotune_a: bool = False
    quantize_16bit: bool = False
    q_scale: float | None = None
    threshold_form: str = "methods"
    max_steps: int = 1_000_000
    target: float | None = None       # problem units: SAT count / cut / equations
    trials: int = 100
    seed: int = 0
    trace_every: int = 0
    event_log: bool = False
    workers: int | None = None
    out: str | None = None

    @classmethod
    def from_file(cls, path, **overrides) -> "CampaignConfig":
        data = json.loads(Path(path).read_text())
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


@dataclass
class ProblemBundle:
    """A loaded problem plus everything needed to score and target it."""

    kind: str                      # maxsat | maxcut | 3r3x
    system: ClauseSystem           # what the solver runs on
    num_original_vars: int
    second_order: bool
    describe: dict
    cnf: CnfFormula | None = None
    meta: CnfIsingMeta | None = None
    graph: WeightedGraph | None = None
    instance: PlantedInstance | None = None

    def objective(self, spins: np.ndarray) -> float:
        """Problem-level score from the original variables only."""
        s = np.asarray(spins)[: self.num_original_vars]
        if self.kind == "maxsat":
            return float(satisfied_count(self.cnf, s))
        if self.kind == "maxcut":
            return float(cut_value(self.graph, s))
        prods = np.prod(s[self.instance.clause_vars], axis=1)
        signs = np.where(self.instance.rhs_bits == 0, 1, -1)
        return float(np.sum(prods == signs))

    def max_objective(self) -> float:
        if self.kind == "maxsat":
            return float(self.meta.num_clauses)
        if self.kind == "maxcut":
            return float(sum(w for _, _, w in self.graph.edges if w > 0))
        return float(self.instance.clause_vars.shape[0])

    def target_energy(self, target: float) -> float:
        """Energy threshold whose attainment certifies the objective target."""
        if self.kind == "maxsat":
            m = self.meta.num_clauses
            if self.second_order:
                return 2.0 * m - 4.0 * target
            if target >= m:
                return self.meta.full_sat_energy()
            return self.meta.energy_for_sat_count(math.ceil(target))
        if self.kind == "maxcut":
            return self.graph.total_weight / 2.0 - target
        m = self.instance.clause_vars.shape[0]
        if self.second_order:
            return -(2.0 * m + 2.0 * target)
        return m - 2.0 * target


def load_problem(config: CampaignConfig) -> ProblemBundle:
    second_order = config.mode == "second-order"
    name = config.problem

    if name == "3r3x" or name.endswith(".json"):
        if name == "3r3x":
            if config.vars is None:
                raise ValueError("problem '3r3x' needs vars set")
            instance = gen_3r3x(config.vars, np.random.default_rng(config.instance_seed))
        else:
            instance = read_planted_json(name)
        describe = {"kind": "3r3x", "num_vars": int(instance.system.num_spins),
                    "num_clauses": int(instance.clause_vars.shape[0])}
        system = instance.system
        if second_order:
            system = lower_qubo(quadratize_3r3x(instance))
        return ProblemBundle(kind="3r3x", system=system,
                             num_original_vars=instance.system.num_spins,
                             second_order=second_order, describe=describe,
                             instance=instance)

    if name.endswith(".cnf"):
        cnf = read_cnf_file(name)
        ho_system, meta = cnf_to_ising(cnf)
        describe = {"kind": "maxsat", "num_vars": cnf.num_vars,
                    "num_clauses": meta.num_clauses}
        system = ho_system
        if second_order:
            system = lower_qubo(quadratize_cnf3(cnf))
        return ProblemBundle(kind="maxsat", system=system,
                             num_original_vars=cnf.num_vars,
                             second_order=second_order, describe=describe,
                             cnf=cnf, meta=meta)

    if second_order:
        raise ValueError("--second-order applies to MAX-SAT and 3R-3X problems only")
    graph = read_gset_file(name)
    describe = {"kind": "maxcut", "num_vertices": graph.num_vertices,
                "num_edges": graph.num_edges}
    return ProblemBundle(kind="maxcut", system=maxcut_to_ising(graph),
                         num_original_vars=graph.num_vertices,
                         second_order=False, describe=describe, graph=graph)


def trial_seed(master_seed: int, index: int) -> int:
    """Pure function of (master seed, trial index)."""
    return int(np.random.SeedSequence([int(master_seed), int(index)]).generate_state(1)[0])


def build_schedule(config: CampaignConfig, system: ClauseSystem) -> AnnealSchedule:
    tau0 = config.tau0
    amplitude = config.amplitude_a
    if config.autotune_a:
        probe = NoiseSource(seed=config.seed)
        amp = autotune_amplitude(system, probe)
        tau0 = amp / config.cap_c
        if config.mode == "async" and amplitude is None:
            amplitude = amp
    b = config.b_param
    if config.mean_exp_noise is not None:
        b = b_from_mean_noise(config.mean_exp_noise)
    eta = config.eta
    if config.mode == "async" and eta is None:
        eta = 1.0 / max(system.num_spins, 1)
    return AnnealSchedule(
        tau0=tau0, cap_c=config.cap_c, delta=config.delta, b_param=b,
        epsilon=config.epsilon, eta=eta, amplitude_a=amplitude,
        quantize_16bit=config.quantize_16bit, q_scale=config.q_scale,
        threshold_form=config.threshold_form,
    )


def _run_one_trial(args):
    (system, schedule, coloring, budget, seed, mode, num_original,
     trace_every, event_log) = args
    noise = NoiseSource(seed=seed)
    init = random_spins(num_original, noise.rng)
    if system.num_spins > num_original:
        init = extend_initial_spins(init, system.num_spins, noise.rng)
    start = time.perf_counter()
    if mode == "colored":
        result = solve_colored(system, schedule, coloring, budget, noise,
                               init=init, trace_every=trace_every, event_log=event_log)
    elif mode == "async":
        result = solve_async_bernoulli(system, schedule, budget, noise,
                                       init=init, trace_every=trace_every,
                                       event_log=event_log)
    else:
        result = solve_uncolored(system, schedule, budget, noise,
                                 init=init, trace_every=trace_every,
                                 event_log=event_log)
    wall = time.perf_counter() - start
    return seed, result, wall


def run_campaign(config: CampaignConfig):
    """Run ``config.trials`` independent seeded runs and aggregate stats.

    Returns ``(stats, summary)`` and, when ``config.out`` is set, writes
    ``<out>.json`` plus optional per-trial trace/event CSVs.  Results are
    independent of the worker count; wall-time fields are the only
    non-deterministic part of the summary.
    """
    if config.mode not in CAMPAIGN_MODES:
        raise ValueError(f"mode must be one of {CAMPAIGN_MODES}")
    bundle = load_problem(config)
    schedule = build_schedule(config, bundle.system)
    coloring: Coloring | None = None
    if config.mode == "colored":
        coloring = dsatur_color(conflict_graph(bundle.system))

    target_energy = None
    if config.target is not None:
        target_energy = bundle.target_energy(config.target)
    budget = SolveBudget(max_steps=config.max_steps, target_energy=target_energy)

    solver_mode = "uncolored" if config.mode == "second-order" else config.mode
    seeds = [trial_seed(config.seed, i) for i in range(config.trials)]
    jobs = [(bundle.system, schedule, coloring, budget, s, solver_mode,
             bundle.num_original_vars, config.trace_every, config.event_log)
            for s in seeds]

    workers = config.workers if config.workers else min(os.cpu_count() or 1, config.trials)
    if workers > 1 and config.trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_one_trial, jobs, chunksize=1))
    else:
        outcomes = [_run_one_trial(job) for job in jobs]

    records: list[TrialRecord] = []
    results = []
    for seed, result, wall in outcomes:
        objective = bundle.objective(result.best_spins)
        success = bool(target_energy is not None and result.best_energy <= target_energy)
        records.append(TrialRecord(
            seed=int(seed),
            best_objective=float(objective),
            best_energy=float(result.best_energy),
            steps=int(result.steps_executed),
            success=success,
            wall_time_s=float(wall),
        ))
        results.append(result)

    stats = _aggregate(records, config, target_energy)
    summary = _summarize(stats, config, bundle, schedule, coloring)
    if config.out:
        _write_artifacts(config, summary, records, results, bundle)
    return stats, summary


def _aggregate(records, config: CampaignConfig, target_energy) -> TrialStats:
    trials = len(records)
    if target_energy is None:
        return TrialStats(trials=trials, successes=0, success_prob=None,
                          per_trial=records, tts_iterations=None,
                          tts_seconds=None, median_tts_capped=None)
    successes = sum(r.success for r in records)
    p_s = successes / trials if trials else 0.0
    walls = sorted(r.wall_time_s for r in records)
    median_wall = walls[(len(walls) - 1) // 2] if walls else 0.0
    per_steps = [r.steps if r.success else None for r in records]
    return TrialStats(
        trials=trials,
        successes=successes,
        success_prob=p_s,
        per_trial=records,
        tts_iterations=tts(p_s, config.max_steps) if config.max_steps else None,
        tts_seconds=tts(p_s, median_wall) if median_wall > 0 else None,
        median_tts_capped=median_tts_capped(per_steps, config.max_steps),
    )


def _json_safe(value):
    if isinstance(value, float) and math.isinf(value):
        return None
    return value


def _summarize(stats: TrialStats, config: CampaignConfig, bundle: ProblemBundle,
               schedule: AnnealSchedule, coloring) -> dict:
    objectives = sorted(r.best_objective for r in stats.per_trial)
    median_objective = objectives[(len(objectives) - 1) // 2] if objectives else None
    summary = {
        "schema_version": SCHEMA_VERSION,
        "config": {k: v for k, v in asdict(config).items() if k != "workers"},
        "problem": bundle.describe,
        "schedule": {
            "tau0": schedule.tau0, "cap_c": schedule.cap_c, "delta": schedule.delta,
            "b_param": schedule.b_param, "epsilon": schedule.epsilon,
            "eta": schedule.eta, "amplitude_a": schedule.amplitude_a,
            "quantize_16bit": schedule.quantize_16bit,
            "threshold_form": schedule.threshold_form,
        },
        "num_colors": coloring.num_colors if coloring is not None else None,
        "trials": stats.trials,
        "successes": stats.successes,
        "success_prob": stats.success_prob,
        "median_best_objective": median_objective,
        "best_objective": max(objectives) if objectives else None,
        "tts_iterations": _json_safe(stats.tts_iterations),
        "median_tts_capped_iterations": _json_safe(stats.median_tts_capped),
        "per_trial": [
            {"seed": r.seed, "best_objective": r.best_objective,
             "best_energy": r.best_energy, "steps": r.steps, "success": r.success}
            for r in stats.per_trial
        ],
        # wall-time block: excluded from the determinism contract
        "wall": {
            "tts_seconds": _json_safe(stats.tts_seconds),
            "per_trial_seconds": [r.wall_time_s for r in stats.per_trial],
        },
    }
    return summary


def _trace_converter(bundle: ProblemBundle):
    """Affine energy -> objective map when one exists, else identity on energy."""
    if bundle.kind == "maxcut":
        half_w = bundle.graph.total_weight / 2.0
        return lambda e: half_w - e, "cut"
    if bundle.kind == "3r3x" and not bundle.second_order:
        m = bundle.instance.clause_vars.shape[0]
        return lambda e: (m - e) / 2.0, "satisfied_equations"
    if (bundle.kind == "maxsat" and not bundle.second_order
            and bundle.meta.uniform_length is not None):
        meta = bundle.meta
        return meta.sat_count_from_energy, "satisfied_clauses"
    return lambda e: e, "energy"


def _write_artifacts(config: CampaignConfig, summary: dict, records, results, bundle):
    out = Path(config.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.with_suffix(".json").write_text(json.dumps(summary, indent=2) + "\n")
    convert, unit = _trace_converter(bundle)
    for i, (record, result) in enumerate(zip(records, results)):
        if config.trace_every > 0 and result.objective_trace is not None:
            path = out.parent / f"{out.stem}.trial{i:04d}.trace.csv"
            with path.open("w") as fh:
                fh.write(f"step,{unit}\n")
                for step, energy in result.objective_trace:
                    fh.write(f"{int(step)},{convert(energy)}\n")
        if config.event_log and result.event_log is not None:
            path = out.parent / f"{out.stem}.trial{i:04d}.events.csv"
            with path.open("w") as fh:
                fh.write("step,spin\n")
                for step, spin in result.event_log:
                    fh.write(f"{int(step)},{int(spin)}\n")
