"""Repair command: fair scores and the repair manifest."""

import logging
from pathlib import Path

import click

from fairscore.commands import (
    RunConfig,
    load_population,
    manifest_header,
    repair_options,
    run_config,
    split_list,
    write_json,
    write_rows,
)
from fairscore.engine.data import write_repair_csv
from fairscore.engine.metrics import parity_gap
from fairscore.engine.repair import repair

logger = logging.getLogger(__name__)

REPAIRED_FILE = "repaired.csv"
MANIFEST_FILE = "manifest.json"
DISTRIBUTIONS_FILE = "distributions.csv"


def run_repair(records, features, config: RunConfig, theta: float | None = None):
    """Repair ``records`` with the config's parameters (``theta`` overrides the default theta)."""
    return repair(
        records,
        features,
        config.policy(theta),
        bin_width=config.bin_width,
        grid_size=config.grid_size,
        round_to=config.round_to,
    )


def write_repair_outputs(out: Path, records, features, result, header: dict) -> dict:
    """Write ``repaired.csv``, ``manifest.json`` and the per-group histograms into ``out``."""
    repaired_path = out / REPAIRED_FILE
    write_repair_csv(repaired_path, records, result.fair.tolist(), features)
    write_rows(out / DISTRIBUTIONS_FILE, result.distribution_rows())
    gap = parity_gap(result.fair_group_dists, result.partition.weights)
    manifest = {**header, "repair": result.to_dict(), "parity_gap": gap}
    write_json(out / MANIFEST_FILE, manifest)
    return {
        "repaired_csv": str(repaired_path),
        "manifest": str(out / MANIFEST_FILE),
        "distributions": str(out / DISTRIBUTIONS_FILE),
        "parity_gap": gap,
    }


def cmd_repair(config: RunConfig) -> dict:
    """
    Repair the run's population and write the fair scores with a manifest.

    The manifest records theta and weight per group, barycenter summary statistics,
    the parity gap of the fair group distributions and enough to replay the run.
    """
    records, features, inputs, seed = load_population(config)
    result = run_repair(records, features, config)
    summary = write_repair_outputs(config.out, records, features, result, manifest_header(config, inputs, seed))
    summary["population"] = result.partition.size
    summary["groups"] = len(result.partition.keys)
    return summary


@click.command("repair")
@repair_options
@click.option("--theta", type=float, help="Default theta in [0, 1] for every group.")
def repair_command(input_path, synthetic_spec, features, bin_width, grid_size, theta_groups, round_to, seed, out, theta):
    """Repair raw scores toward group fairness."""
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
        theta=theta,
    )
    summary = cmd_repair(config)
    click.echo(
        f"Repaired {summary['population']} records in {summary['groups']} groups "
        f"(parity gap {summary['parity_gap']:.6g}) -> {summary['repaired_csv']}"
    )
