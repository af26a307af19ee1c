"""hoim: a higher-order Ising machine.

Clause-centric simulated annealing with a Fowler-Nordheim cooling
schedule: higher-order interactions are kept as-is (no quadratization
needed), flips are driven by noisy-threshold latent neurons, and clause
outputs toggle by parity.  Front-ends map MAX-CUT, MAX-kSAT and planted
3R-3X XORSAT onto the same solver; a quadratization path provides the
second-order baseline for comparisons.
"""

from .annealing import (AnnealSchedule, NoiseSource, autotune_amplitude,
                        b_from_mean_noise, bernoulli_blocker,
                        exponential_threshold, mean_noise_from_b,
                        quantize_threshold, temperature)
from .baseline import extend_initial_spins, lower_qubo
from .benchmark import (CampaignConfig, TrialStats, load_problem,
                        median_tts_capped, run_campaign, tts)
from .coloring import Coloring, conflict_graph, dsatur_color, validate_coloring
from .estimator import IsingAnnealer
from .model import (ClauseState, ClauseSystem, apply_flip, build_clause_system,
                    clause_outputs, delta_energy, random_spins, spin_input,
                    spin_inputs)
from .problems import (CnfFormula, PlantedInstance, QuboSystem, WeightedGraph,
                       cnf_to_ising, cut_value, gen_3r3x, maxcut_to_ising,
                       parse_dimacs_cnf, parse_gset, quadratize_3r3x,
                       quadratize_cnf3, resource_report, satisfied_count)
from .solver import (RunResult, SolveBudget, arbiter_select, latent_fire_mask,
                     parity_toggle, solve_async_bernoulli, solve_colored,
                     solve_uncolored)

__version__ = "0.1.0"

__all__ = [
    "AnnealSchedule", "NoiseSource", "temperature", "exponential_threshold",
    "bernoulli_blocker", "quantize_threshold", "autotune_amplitude",
    "b_from_mean_noise", "mean_noise_from_b",
    "ClauseSystem", "ClauseState", "build_clause_system", "clause_outputs",
    "delta_energy", "spin_input", "spin_inputs", "apply_flip", "random_spins",
    "Coloring", "conflict_graph", "dsatur_color", "validate_coloring",
    "RunResult", "SolveBudget", "latent_fire_mask", "arbiter_select",
    "parity_toggle", "solve_uncolored", "solve_colored", "solve_async_bernoulli",
    "CnfFormula", "WeightedGraph", "QuboSystem", "PlantedInstance",
    "parse_dimacs_cnf", "cnf_to_ising", "satisfied_count", "parse_gset",
    "maxcut_to_ising", "cut_value", "gen_3r3x", "quadratize_cnf3",
    "quadratize_3r3x", "resource_report",
    "lower_qubo", "extend_initial_spins",
    "IsingAnnealer",
    "CampaignConfig", "TrialStats", "tts", "median_tts_capped",
    "run_campaign", "load_problem",
]
