"""Synthetic population command."""

import logging

import click

from fairscore.commands import (
    RunConfig,
    manifest_header,
    out_option,
    run_config,
    seed_option,
    spec_option,
    synthetic_spec_for,
    write_json,
)
from fairscore.engine.data import generate_synthetic, write_population_csv

logger = logging.getLogger(__name__)

POPULATION_FILE = "population.csv"
MANIFEST_FILE = "population.manifest.json"


def cmd_generate(config: RunConfig) -> dict:
    """
    Draw the synthetic population and write it with its manifest.

    Returns:
        Summary with output paths, population size and seed.
    """
    spec = synthetic_spec_for(config)
    records = generate_synthetic(spec)
    population_path = config.out / POPULATION_FILE
    write_population_csv(population_path, records, spec.features)

    manifest = manifest_header(config, seed=spec.seed)
    manifest["spec"] = spec.to_dict()
    manifest["population"] = len(records)
    write_json(config.out / MANIFEST_FILE, manifest)
    return {
        "population_csv": str(population_path),
        "manifest": str(config.out / MANIFEST_FILE),
        "population": len(records),
        "seed": spec.seed,
    }


@click.command("generate")
@spec_option
@seed_option
@out_option
def generate(synthetic_spec, seed, out):
    """Generate a synthetic scored population."""
    config = run_config(synthetic_spec=synthetic_spec, seed=seed, out=out)
    result = cmd_generate(config)
    click.echo(f"Generated {result['population']} records (seed {result['seed']}) -> {result['population_csv']}")
