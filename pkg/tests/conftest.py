"""Shared fixtures."""

import json
import logging

import numpy as np
import pytest
from click.testing import CliRunner

from fairscore.log import PACKAGE_LOGGER
from fairscore.models import ScoreRecord, SyntheticGroup, SyntheticSpec
from fairscore.engine.data import generate_synthetic, preset_spec, write_population_csv

FEATURES = ("gender", "ethnicity")


def build_records(groups: dict, features=FEATURES) -> list[ScoreRecord]:
    """Records from ``{traits: scores}``; ids are zero-padded and interleave the groups."""
    rows = [(tuple(str(t) for t in traits), float(score)) for traits, scores in groups.items() for score in scores]
    width = len(str(len(rows)))
    return [ScoreRecord(id=f"r{str(i).zfill(width)}", traits=traits, raw_score=score) for i, (traits, score) in enumerate(rows)]


@pytest.fixture(autouse=True)
def reset_package_logger():
    """The CLI installs its own handler; hand logging back to pytest afterwards."""
    yield
    logger = logging.getLogger(PACKAGE_LOGGER)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.propagate = True
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def rng():
    return np.random.default_rng(2019)


@pytest.fixture
def make_records():
    return build_records


@pytest.fixture
def two_groups():
    """Uniform {10, 20, 30} and {40, 50, 60} in two equally sized groups."""
    return build_records({("0", "0"): [10, 20, 30], ("1", "0"): [40, 50, 60]})


@pytest.fixture
def separated_groups():
    """Two translated groups of 20 integer scores, 30 points apart."""
    return build_records({("0", "0"): range(10, 30), ("1", "0"): range(40, 60)})


@pytest.fixture
def small_spec():
    """A six-group design small enough for quick end-to-end runs."""
    groups = [
        SyntheticGroup(("0", "0"), 400, 60.0, 12.0),
        SyntheticGroup(("0", "1"), 400, 58.0, 11.0),
        SyntheticGroup(("0", "2"), 300, 50.0, 12.0),
        SyntheticGroup(("1", "0"), 400, 62.0, 13.0),
        SyntheticGroup(("1", "1"), 300, 47.0, 11.0),
        SyntheticGroup(("1", "2"), 200, 44.0, 10.0),
    ]
    return SyntheticSpec(FEATURES, tuple(groups), 3, 88, seed=7)


@pytest.fixture
def small_population(small_spec):
    return generate_synthetic(small_spec)


@pytest.fixture
def population_csv(tmp_path, separated_groups):
    path = tmp_path / "population.csv"
    write_population_csv(path, separated_groups, FEATURES)
    return path


@pytest.fixture(scope="session")
def full_population():
    """The default 100,000-record synthetic population."""
    return generate_synthetic(preset_spec("default"))


@pytest.fixture
def small_spec_file(tmp_path, small_spec):
    path = tmp_path / "small_spec.json"
    path.write_text(json.dumps(small_spec.to_dict()), encoding="utf-8")
    return path


@pytest.fixture
def two_groups_csv(tmp_path, two_groups):
    path = tmp_path / "two_groups.csv"
    write_population_csv(path, two_groups, FEATURES)
    return path


@pytest.fixture
def runner():
    return CliRunner()
