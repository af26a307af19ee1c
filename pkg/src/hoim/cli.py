"""Benchmark command line: solve, color, quadratize, campaign, report."""

from __future__ import annotations

import json
from pathlib import Path

import click
import numpy as np

from .benchmark import CampaignConfig, load_problem, run_campaign
from .coloring import conflict_graph, dsatur_color
from .io import (read_cnf_file, write_planted_json, write_qubo_json)
from .problems import gen_3r3x, quadratize_cnf3, resource_report


def _common_options(fn):
    opts = [
        click.option("--mode", default="uncolored",
                     type=click.Choice(["uncolored", "colored", "async", "second-order"]),
                     help="Update rule (second-order quadratizes first)."),
        click.option("--tau0", default=0.15625, show_default=True, type=float,
                     help="Cooling amplitude."),
        click.option("--cap-c", default=8.0e4, show_default=True, type=float,
                     help="Cooling time constant C."),
        click.option("--delta", default=2.0e-3, show_default=True, type=float,
                     help="Sampling period (smaller = slower annealing)."),
        click.option("--b-param", default=1.0, show_default=True, type=float,
                     help="Acceptance hyperparameter B."),
        click.option("--mean-ne", "mean_exp_noise", default=None, type=float,
                     help="Mean of the exponential noise (overrides --b-param)."),
        click.option("--epsilon", default=1.0e-12, show_default=True, type=float),
        click.option("--eta", default=None, type=float,
                     help="Unblocking probability (async mode; default 1/N)."),
        click.option("--amplitude-a", default=None, type=float,
                     help="Bernoulli blocking amplitude (async mode)."),
        click.option("--autotune-a", is_flag=True,
                     help="Probe max |dE| and derive tau0 = A/C (and async amplitude)."),
        click.option("--quantize-16bit", is_flag=True,
                     help="Emulate 16-bit fixed-point thresholds."),
        click.option("--q-scale", default=None, type=float,
                     help="Fixed-point scale for --quantize-16bit."),
        click.option("--threshold-form", default="methods",
                     type=click.Choice(["methods", "pseudocode"]),
                     help="Acceptance-threshold convention."),
        click.option("--max-steps", default=1_000_000, show_default=True, type=int),
        click.option("--target", default=None, type=float,
                     help="Early-stop objective (SAT count / cut value / equations)."),
        click.option("--trials", default=1, show_default=True, type=int),
        click.option("--seed", default=0, show_default=True, type=int),
        click.option("--trace-every", default=0, show_default=True, type=int,
                     help="Record the objective every k steps (0 = off)."),
        click.option("--event-log", is_flag=True, help="Record (step, spin) spike events."),
        click.option("--workers", default=None, type=int),
        click.option("--out", default=None, type=click.Path(),
                     help="Write <out>.json summary (+ CSVs with --trace-every/--event-log)."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _run(problem: str, second_order_flag: bool, **kwargs) -> None:
    if second_order_flag:
        kwargs["mode"] = "second-order"
    config = CampaignConfig(problem=problem, **kwargs)
    _, summary = run_campaign(config)
    _report(summary)


def _report(summary: dict) -> None:
    best = summary["best_objective"]
    median = summary["median_best_objective"]
    click.echo(f"problem: {summary['problem']}")
    if summary["num_colors"] is not None:
        click.echo(f"colors: {summary['num_colors']}")
    click.echo(f"trials: {summary['trials']}  best objective: {best}  median: {median}")
    if summary["success_prob"] is not None:
        click.echo(f"success probability: {summary['success_prob']:.4f} "
                   f"({summary['successes']}/{summary['trials']})")
        click.echo(f"TTS (iterations): {summary['tts_iterations']}")
        click.echo(f"median capped TTS (iterations): {summary['median_tts_capped_iterations']}")
        click.echo(f"TTS (seconds): {summary['wall']['tts_seconds']}")


@click.group()
def main():
    """Higher-order Ising machine benchmark harness."""


@main.command("solve-maxsat")
@click.argument("cnf", type=click.Path(exists=True))
@click.option("--second-order", is_flag=True, help="Quadratize and run the 2nd-order baseline.")
@_common_options
def solve_maxsat(cnf, second_order, **kwargs):
    """Solve a DIMACS MAX-SAT instance."""
    _run(cnf, second_order, **kwargs)


@main.command("solve-maxcut")
@click.argument("gset", type=click.Path(exists=True))
@_common_options
def solve_maxcut(gset, **kwargs):
    """Solve a Gset MAX-CUT instance."""
    _run(gset, False, **kwargs)


@main.command("solve-3r3x")
@click.argument("instance", type=click.Path(exists=True))
@click.option("--second-order", is_flag=True, help="Quadratize and run the 2nd-order baseline.")
@_common_options
def solve_3r3x(instance, second_order, **kwargs):
    """Solve a generated 3R-3X instance (JSON)."""
    _run(instance, second_order, **kwargs)


@main.command("gen-3r3x")
@click.option("--vars", "num_vars", required=True, type=int)
@click.option("--instance-seed", default=0, show_default=True, type=int)
@click.option("--out", required=True, type=click.Path())
def gen_3r3x_cmd(num_vars, instance_seed, out):
    """Generate a planted 3-regular 3-XORSAT instance."""
    instance = gen_3r3x(num_vars, np.random.default_rng(instance_seed))
    write_planted_json(instance, out)
    click.echo(f"wrote {out}: {num_vars} variables, {instance.clause_vars.shape[0]} equations, "
               f"planted energy {-instance.clause_vars.shape[0]}")


@main.command("quadratize")
@click.argument("cnf", type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
def quadratize_cmd(cnf, out):
    """Quadratize a 3-SAT instance to QUBO JSON."""
    formula = read_cnf_file(cnf)
    qubo = quadratize_cnf3(formula)
    write_qubo_json(qubo, out)
    click.echo(f"wrote {out}: {qubo.num_spins} spins "
               f"({qubo.num_vars} original + {qubo.num_spins - qubo.num_vars} auxiliary)")


@main.command("color")
@click.argument("problem", type=click.Path(exists=True))
@click.option("--json-out", default=None, type=click.Path(),
              help="Dump the spin -> color map as JSON.")
def color_cmd(problem, json_out):
    """Color a problem's conflict graph and print the group sizes."""
    bundle = load_problem(CampaignConfig(problem=problem))
    coloring = dsatur_color(conflict_graph(bundle.system))
    sizes = coloring.group_sizes()
    click.echo(f"colors: {coloring.num_colors}")
    click.echo("group sizes: " + " ".join(str(s) for s in sizes))
    if max(sizes, default=1) <= 1:
        click.echo("warning: every group is a singleton; "
                   "colored updates degenerate to a serial scan", err=True)
    if json_out:
        Path(json_out).write_text(
            json.dumps({"num_colors": coloring.num_colors,
                        "spin_color": coloring.spin_color.tolist()}, indent=2) + "\n")


@main.command("campaign")
@click.argument("config", type=click.Path(exists=True))
@_common_options
def campaign_cmd(config, **kwargs):
    """Run a campaign described by a JSON config (flags override keys)."""
    ctx = click.get_current_context()
    overrides = {
        key: value for key, value in kwargs.items()
        if ctx.get_parameter_source(key) == click.core.ParameterSource.COMMANDLINE
    }
    cfg = CampaignConfig.from_file(config, **overrides)
    _, summary = run_campaign(cfg)
    _report(summary)


@main.command("resource-report")
@click.argument("cnf", type=click.Path(exists=True))
def resource_report_cmd(cnf):
    """Quadratization cost of a CNF: variable and interconnection ratios."""
    formula = read_cnf_file(cnf)
    report = resource_report(formula)
    click.echo(f"variables: {report.num_vars}  auxiliaries: {report.num_aux}")
    click.echo(f"variable ratio: {report.variable_ratio:.4f}")
    click.echo(f"incidence: {report.h_rows} x {report.h_cols} ({report.h_nnz} nonzero)")
    click.echo(f"interconnection ratio (dense): {report.interconnection_ratio_dense:.4f}")
    click.echo(f"interconnection ratio (nnz): {report.interconnection_ratio_nnz:.4f}")


if __name__ == "__main__":
    main()
