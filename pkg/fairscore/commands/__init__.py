"""Command modules and the run configuration they share."""

import csv
import functools
import hashlib
import json
import logging
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import click
import numpy as np

from fairscore import __version__
from fairscore.config import Config, parse_grid_size
from fairscore.errors import DataError, UsageError
from fairscore.models import GroupSelector, ThetaPolicy
from fairscore.models.policy import check_theta
from fairscore.engine.data import (
    generate_synthetic,
    load_population_csv,
    load_synthetic_spec,
    preset_spec,
)
from fairscore.engine.metrics import make_k_grid

logger = logging.getLogger(__name__)

DEFAULT_PRESET = "default"


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs to replay a run."""

    input: Path | None = None
    synthetic_spec: str | None = None
    features: tuple[str, ...] | None = None
    bin_width: float = Config.BIN_WIDTH
    theta: float = Config.THETA
    theta_groups: tuple[str, ...] = ()
    grid_size: int | str | None = Config.GRID_SIZE
    round_to: int | None = None
    k_step: int | None = Config.K_STEP
    threshold: float = Config.THRESHOLD
    out: Path = Config.OUTPUT_DIR
    seed: int | None = None
    workers: int = Config.WORKERS
    repaired: Path | None = None
    thetas: tuple[float, ...] = field(default=())

    def validate(self) -> "RunConfig":
        """Check every field; raises UsageError."""
        if self.input is not None and self.synthetic_spec is not None:
            raise UsageError("--input and --synthetic-spec are mutually exclusive")
        if not (math.isfinite(self.bin_width) and self.bin_width > 0):
            raise UsageError(f"--bin-width must be positive, got {self.bin_width!r}")
        check_theta(self.theta, "--theta")
        self.selectors()
        parse_grid_size(self.grid_size)
        if self.round_to is not None and self.round_to < 0:
            raise UsageError(f"--round must be nonnegative, got {self.round_to!r}")
        if self.k_step is not None and self.k_step < 1:
            raise UsageError(f"--k-step must be positive, got {self.k_step!r}")
        if not 0.0 < self.threshold <= 1.0:
            raise UsageError(f"--threshold must lie in (0, 1], got {self.threshold!r}")
        if self.workers < 1:
            raise UsageError(f"--workers must be at least 1, got {self.workers!r}")
        for theta in self.thetas:
            check_theta(theta, "sweep theta")
        return self

    def selectors(self) -> tuple[GroupSelector, ...]:
        return tuple(GroupSelector.parse(text) for text in self.theta_groups)

    def policy(self, theta: float | None = None) -> ThetaPolicy:
        """Default theta (or ``theta``) plus the per-group overrides."""
        default = self.theta if theta is None else theta
        return ThetaPolicy(default_theta=default, selectors=self.selectors())

    def k_grid(self, population: int) -> np.ndarray:
        step = self.k_step if self.k_step is not None else Config.default_k_step(population)
        return make_k_grid(population, step)

    def to_dict(self):
        """Convert to dictionary for JSON serialization."""
        data = asdict(self)
        for name in ("input", "out", "repaired"):
            data[name] = None if data[name] is None else str(data[name])
        for name in ("features", "theta_groups", "thetas"):
            data[name] = None if data[name] is None else list(data[name])
        return data


def run_config(**options) -> RunConfig:
    """Build a validated RunConfig from command options; unset options keep their defaults."""
    given = {name: value for name, value in options.items() if value is not None}
    for name in ("input", "out", "repaired"):
        if name in given:
            given[name] = Path(given[name])
    for name in ("features", "theta_groups", "thetas"):
        if name in given:
            given[name] = tuple(given[name])
    return replace(RunConfig(), **given).validate()


def split_list(value: str | None) -> tuple[str, ...] | None:
    """``"a, b"`` -> ``("a", "b")``."""
    if value is None:
        return None
    return tuple(part.strip() for part in value.split(",") if part.strip())


def parse_thetas(value: str) -> tuple[float, ...]:
    thetas = []
    for part in split_list(value) or ():
        try:
            thetas.append(float(part))
        except ValueError:
            raise UsageError(f"cannot parse sweep theta {part!r}") from None
    if not thetas:
        raise UsageError("the sweep needs at least one theta")
    return tuple(check_theta(theta, "sweep theta") for theta in thetas)


def significant(value, digits: int = Config.SIGNIFICANT_DIGITS):
    """Round floats (recursively in containers) to ``digits`` significant digits."""
    if isinstance(value, dict):
        return {key: significant(item, digits) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [significant(item, digits) for item in value]
    if isinstance(value, np.ndarray):
        return significant(value.tolist(), digits)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(f"{value:.{digits}g}")
    return value


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{Config.SIGNIFICANT_DIGITS}g}"
    return str(value)


def write_json(path: Path, data: dict):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(significant(data), f, indent=2)
        f.write("\n")
    logger.info("wrote %s", path)


def write_rows(path: Path, rows: list[dict]):
    """Write dict rows as CSV; the first row fixes the columns."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        if rows:
            columns = list(rows[0])
            writer.writerow(columns)
            for row in rows:
                writer.writerow([format_cell(row[column]) for column in columns])
    logger.info("wrote %s", path)


def sha256_of(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(functools.partial(f.read, 1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def manifest_header(config: RunConfig, inputs: list[Path] = (), seed: int | None = None) -> dict:
    """Version, configuration, input digests and seed shared by every manifest."""
    return {
        "version": __version__,
        "config": config.to_dict(),
        "inputs": {str(path): sha256_of(path) for path in inputs},
        "seed": seed,
    }


def synthetic_spec_for(config: RunConfig):
    """The synthetic design named by the config (file path or preset), seed applied."""
    name = config.synthetic_spec or DEFAULT_PRESET
    if Path(name).is_file():
        spec = load_synthetic_spec(name)
    else:
        # presets draw with the configured seed; spec files carry their own
        spec = preset_spec(name).with_seed(Config.SEED)
    if config.seed is not None:
        spec = spec.with_seed(config.seed)
    return spec


def load_population(config: RunConfig):
    """
    Records of the run: read from ``--input`` or drawn from the synthetic design.

    Returns:
        (records, features, input files, seed)
    """
    if config.input is not None:
        if not config.input.is_file():
            raise DataError(f"input file not found: {config.input}")
        records, features = load_population_csv(config.input, config.features)
        return records, features, [config.input], config.seed
    spec = synthetic_spec_for(config)
    inputs = [Path(config.synthetic_spec)] if config.synthetic_spec and Path(config.synthetic_spec).is_file() else []
    return generate_synthetic(spec), spec.features, inputs, spec.seed


# shared click options
input_option = click.option("--input", "input_path", type=click.Path(dir_okay=False), help="Population CSV (id first).")
spec_option = click.option(
    "--synthetic-spec", help="Synthetic design: a JSON file or a preset name (default, lsat)."
)
features_option = click.option("--features", help="Comma-separated protected feature columns.")
out_option = click.option("--out", type=click.Path(file_okay=False), help="Output directory.")
seed_option = click.option("--seed", type=int, help="Seed for synthetic populations.")


def repair_options(command):
    """Options shared by ``repair`` and ``sweep``."""
    for option in reversed(
        [
            input_option,
            spec_option,
            features_option,
            click.option("--bin-width", type=float, help="Width of the score bins."),
            click.option("--grid-size", help="Barycenter quantile grid: a positive integer or 'exact'."),
            click.option("--theta-group", "theta_groups", multiple=True, help="Per-group theta, e.g. ethnicity=2:1.0."),
            click.option("--round", "round_to", type=int, help="Round fair scores to this many decimals."),
            seed_option,
            out_option,
        ]
    ):
        command = option(command)
    return command


def evaluation_options(command):
    for option in reversed(
        [
            click.option("--k-step", type=int, help="Step of the k-grid (default 1000 or 100 by population size)."),
            click.option("--threshold", type=float, help="Disparity threshold (0.8 US rule, 0.75 EU variant)."),
        ]
    ):
        command = option(command)
    return command
