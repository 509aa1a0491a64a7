"""Evaluate command: metric curves and the fairness report."""

import logging
from dataclasses import replace
from pathlib import Path

import click

from fairscore.commands import (
    RunConfig,
    evaluation_options,
    features_option,
    input_option,
    manifest_header,
    out_option,
    run_config,
    split_list,
    write_json,
    write_rows,
)
from fairscore.errors import DataError, UsageError
from fairscore.engine.data import load_population_csv, load_repaired_csv
from fairscore.engine.distributions import partition_population
from fairscore.engine.metrics import evaluate
from fairscore.models import FairnessReport

logger = logging.getLogger(__name__)

CURVES_FILE = "metrics_k.csv"
REPORT_FILE = "report.json"


def evaluate_scores(records, features, fair_scores, config: RunConfig) -> FairnessReport:
    """Evaluate fair scores (by id) of ``records`` on the config's k-grid and threshold."""
    partition = partition_population(records, features)
    raw = [record.raw_score for record in records]
    return evaluate(partition, raw, fair_scores, config.k_grid(partition.size), config.threshold)


def write_evaluation_outputs(out: Path, report: FairnessReport, header: dict) -> dict:
    """Write ``metrics_k.csv`` and ``report.json`` into ``out``."""
    write_rows(out / CURVES_FILE, report.curve_rows())
    write_json(out / REPORT_FILE, {**header, **report.to_dict()})
    return {"curves_csv": str(out / CURVES_FILE), "report": str(out / REPORT_FILE)}


def _check_same_population(raw_records, repaired_records):
    raw_ids = {record.id for record in raw_records}
    repaired_ids = {record.id for record in repaired_records}
    if raw_ids != repaired_ids:
        only_raw = sorted(raw_ids - repaired_ids)[:3]
        only_repaired = sorted(repaired_ids - raw_ids)[:3]
        raise DataError(
            f"raw and repaired files hold different ids (only raw: {only_raw}, only repaired: {only_repaired})"
        )


def cmd_evaluate(config: RunConfig) -> dict:
    """
    Evaluate a repaired file.

    Raw scores come from ``config.input`` when given (its ids must match the repaired
    file), else from the ``raw_score`` column of the repaired file itself.
    """
    if config.repaired is None:
        raise UsageError("evaluate needs --repaired")
    if not config.repaired.is_file():
        raise DataError(f"repaired file not found: {config.repaired}")
    records, features, fair = load_repaired_csv(config.repaired, config.features)
    inputs = [config.repaired]
    if config.input is not None:
        if not config.input.is_file():
            raise DataError(f"input file not found: {config.input}")
        raw_records, _ = load_population_csv(config.input, features)
        _check_same_population(raw_records, records)
        raw_by_id = {record.id: record.raw_score for record in raw_records}
        records = [replace(record, raw_score=raw_by_id[record.id]) for record in records]
        inputs.insert(0, config.input)

    report = evaluate_scores(records, features, fair, config)
    summary = write_evaluation_outputs(config.out, report, manifest_header(config, inputs, config.seed))
    summary["fairness_report"] = report
    return summary


@click.command("evaluate")
@click.option("--repaired", type=click.Path(dir_okay=False), required=True, help="Output of the repair command.")
@input_option
@features_option
@evaluation_options
@out_option
def evaluate_command(repaired, input_path, features, k_step, threshold, out):
    """Evaluate fair scores against raw scores."""
    config = run_config(
        repaired=repaired,
        input=input_path,
        features=split_list(features),
        k_step=k_step,
        threshold=threshold,
        out=out,
    )
    summary = cmd_evaluate(config)
    report = summary["fairness_report"]
    click.echo(
        f"E_ind={report.individual_fairness_error:.6g} U={report.decision_maker_utility:.6g} "
        f"parity_gap={report.parity_gap:.6g} -> {summary['report']}"
    )
