"""Sweep command: repair and evaluate over several thetas."""

import logging
from concurrent.futures import ThreadPoolExecutor

import click

from fairscore.commands import (
    RunConfig,
    evaluation_options,
    load_population,
    manifest_header,
    parse_thetas,
    repair_options,
    run_config,
    split_list,
    write_rows,
)
from fairscore.commands.evaluate import evaluate_scores, write_evaluation_outputs
from fairscore.commands.repair import run_repair, write_repair_outputs

logger = logging.getLogger(__name__)

SWEEP_FILE = "sweep.csv"


def theta_dirname(theta: float) -> str:
    return f"theta_{theta:g}"


def _sweep_one(theta: float, records, features, config: RunConfig, header: dict) -> dict:
    out = config.out / theta_dirname(theta)
    result = run_repair(records, features, config, theta)
    write_repair_outputs(out, records, features, result, {**header, "theta": theta})
    report = evaluate_scores(records, features, result.fair_scores, config)
    write_evaluation_outputs(out, report, {**header, "theta": theta})
    logger.info("theta %g: E_ind=%.6g U=%.6g parity_gap=%.6g", theta, report.individual_fairness_error,
                report.decision_maker_utility, report.parity_gap)
    return {
        "theta": theta,
        "individual_fairness_error": report.individual_fairness_error,
        "decision_maker_utility": report.decision_maker_utility,
        "parity_gap": report.parity_gap,
        "min_crossing_rank": report.min_crossing_rank(),
        "max_crossing_rank": report.max_crossing_rank(),
        "min_precision_at_k": float(report.precision.min()),
        "min_ndcg_at_k": float(report.ndcg.min()),
    }


def cmd_sweep(config: RunConfig, thetas=None) -> list[dict]:
    """
    Repair and evaluate the population once per theta.

    Every theta runs as its own worker task on the shared population and writes its
    outputs into ``theta_<value>/``; the trade-off table ``sweep.csv`` has one row per
    theta in ascending order. Any failing task fails the sweep.

    Args:
        config: Run configuration; ``config.thetas`` is used when ``thetas`` is None.
        thetas: Theta values in [0, 1].

    Returns:
        The rows of ``sweep.csv``.
    """
    thetas = sorted(set(config.thetas if thetas is None else thetas))
    if not thetas:
        thetas = [config.theta]
    records, features, inputs, seed = load_population(config)
    header = manifest_header(config, inputs, seed)

    with ThreadPoolExecutor(max_workers=min(config.workers, len(thetas))) as pool:
        futures = [pool.submit(_sweep_one, theta, records, features, config, header) for theta in thetas]
        rows = [future.result() for future in futures]

    write_rows(config.out / SWEEP_FILE, rows)
    return rows


@click.command("sweep")
@repair_options
@click.option("--thetas", default="0,0.5,1", show_default=True, help="Comma-separated theta values.")
@evaluation_options
@click.option("--workers", type=int, help="Parallel worker tasks.")
def sweep(input_path, synthetic_spec, features, bin_width, grid_size, theta_groups, round_to, seed, out,
          thetas, k_step, threshold, workers):
    """Sweep theta and tabulate the fairness/utility trade-off."""
    config = run_config(
        input=input_path,
        synthetic_spec=synthetic_spec,
        features=split_list(features),
        bin_width=bin_width,
        grid_size=grid_size,
        theta_groups=theta_groups,
        round_to=round_to,
        seed=seed,
        out=out,
        thetas=parse_thetas(thetas),
        k_step=k_step,
        threshold=threshold,
        workers=workers,
    )
    rows = cmd_sweep(config)
    for row in rows:
        click.echo(
            f"theta={row['theta']:g} E_ind={row['individual_fairness_error']:.6g} "
            f"U={row['decision_maker_utility']:.6g} parity_gap={row['parity_gap']:.6g} "
            f"crossing={row['min_crossing_rank']}"
        )
