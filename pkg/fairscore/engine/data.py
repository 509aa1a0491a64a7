"""Synthetic populations and CSV input/output of scored populations."""

import csv
import json
import logging
import math
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.stats import norm

from fairscore.config import PRESETS_DIR
from fairscore.errors import CsvFormatError, DataError, MissingScoreError, UsageError
from fairscore.models import ScoreRecord, SyntheticSpec

logger = logging.getLogger(__name__)

SCORE_COLUMNS = ("score", "raw_score")
FAIR_COLUMN = "fair_score"

# truncated draws with less acceptance probability than this are refused
MIN_ACCEPTANCE = 1e-3
# largest number of normal draws requested at once
MAX_BATCH = 1_000_000


def _acceptance(spec: SyntheticSpec, mean: float, std_dev: float) -> float:
    """Probability that a rounded normal draw lands inside the score range."""
    upper = norm.cdf(spec.max_score + 0.5, loc=mean, scale=std_dev)
    lower = norm.cdf(spec.min_score - 0.5, loc=mean, scale=std_dev)
    return float(upper - lower)


def _draw_group(rng: np.random.Generator, spec: SyntheticSpec, group, acceptance: float) -> np.ndarray:
    scores = np.empty(0)
    rejected = 0
    while scores.size < group.count:
        missing = group.count - scores.size
        batch = min(int(math.ceil(missing / acceptance * 1.1)) + 16, MAX_BATCH)
        draws = np.rint(rng.normal(group.mean, group.std_dev, size=batch))
        inside = (draws >= spec.min_score) & (draws <= spec.max_score)
        rejected += int(batch - inside.sum())
        scores = np.concatenate([scores, draws[inside][:missing]])
    if rejected:
        logger.debug("group %s: redrew %d scores outside [%d, %d]", group.key, rejected, spec.min_score, spec.max_score)
    return scores


def generate_synthetic(spec: SyntheticSpec) -> list[ScoreRecord]:
    """
    Draw a synthetic scored population.

    Every group draws its integer scores from a rounded normal distribution, redrawing
    values outside [min_score, max_score]. Each group gets its own child seed, and the
    rows are shuffled before sequential ids are assigned so ties do not line up by group.

    Args:
        spec: Groups, score range and seed.

    Returns:
        Records with ids ``000001``, ``000002``, ...
    """
    children = np.random.SeedSequence(spec.seed).spawn(len(spec.groups) + 1)
    traits, scores = [], []
    for group, child in zip(spec.groups, children):
        acceptance = _acceptance(spec, group.mean, group.std_dev)
        if acceptance < MIN_ACCEPTANCE:
            raise DataError(
                f"group {group.key}: mean {group.mean} with std_dev {group.std_dev} is infeasible "
                f"for the score range [{spec.min_score}, {spec.max_score}]"
            )
        scores.append(_draw_group(np.random.default_rng(child), spec, group, acceptance))
        traits.extend([group.key.values] * group.count)

    scores = np.concatenate(scores)
    order = np.random.default_rng(children[-1]).permutation(scores.size)
    width = len(str(scores.size))
    records = [
        ScoreRecord(id=str(position + 1).zfill(width), traits=traits[index], raw_score=float(scores[index]))
        for position, index in enumerate(order.tolist())
    ]
    logger.info("generated %d synthetic records in %d groups", len(records), len(spec.groups))
    return records


def load_synthetic_spec(path) -> SyntheticSpec:
    """Read a synthetic design from a JSON file."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise DataError(f"synthetic spec not found: {path}") from None
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: invalid JSON ({e})") from None
    if not isinstance(data, dict):
        raise DataError(f"{path}: expected a JSON object")
    return SyntheticSpec.from_dict(data)


def preset_names() -> list[str]:
    return sorted(p.stem for p in PRESETS_DIR.glob("*.json"))


def preset_spec(name: str) -> SyntheticSpec:
    """Built-in synthetic design by name (``default`` or ``lsat``)."""
    path = PRESETS_DIR / f"{name}.json"
    if not path.is_file():
        raise UsageError(f"unknown synthetic preset {name!r}; choose from {preset_names()}")
    return load_synthetic_spec(path)


def _parse_score(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError("not finite")
    return value


def _read_rows(path) -> tuple[list[str], list[tuple[int, list[str]]]]:
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.reader(f)
            header = next(reader, None)
            rows = [(reader.line_num, row) for row in reader if row]
    except FileNotFoundError:
        raise DataError(f"input file not found: {path}") from None
    except (UnicodeDecodeError, csv.Error) as e:
        raise CsvFormatError(path, [(0, str(e))]) from None
    if not header:
        raise CsvFormatError(path, [(1, "missing header row")])
    header = [name.strip() for name in header]
    if header[0] != "id":
        raise CsvFormatError(path, [(1, f"first column must be 'id', got {header[0]!r}")])
    if len(set(header)) != len(header):
        raise CsvFormatError(path, [(1, "duplicate column names")])
    return header, rows


def _fail(path, problems):
    for line, message in problems[:10]:
        logger.error("%s line %d: %s", path, line, message)
    raise CsvFormatError(path, problems)


def _score_column(path, header, score_column):
    candidates = (score_column,) if score_column else SCORE_COLUMNS
    for name in candidates:
        if name in header:
            return name
    _fail(path, [(1, f"missing score column (expected one of {list(candidates)})")])


def _features(path, header, schema, excluded) -> tuple[str, ...]:
    if schema is None:
        return tuple(name for name in header[1:] if name not in excluded)
    features = tuple(schema)
    missing = [name for name in features if name not in header]
    if missing:
        _fail(path, [(1, f"missing columns {missing}")])
    return features


def _parse_records(path, header, rows, features, score_name, extra: str | None = None):
    column = {name: i for i, name in enumerate(header)}
    records, extras, problems = [], {}, []
    seen: dict[str, int] = {}
    for line, row in rows:
        if len(row) != len(header):
            problems.append((line, f"expected {len(header)} fields, got {len(row)}"))
            continue
        record_id = row[0].strip()
        if not record_id:
            problems.append((line, "empty id"))
            continue
        if record_id in seen:
            problems.append((line, f"duplicate id {record_id!r} (first on line {seen[record_id]})"))
            continue
        seen[record_id] = line
        try:
            score = _parse_score(row[column[score_name]])
        except ValueError:
            problems.append((line, f"cannot parse {score_name} {row[column[score_name]]!r}"))
            continue
        if extra is not None:
            try:
                extras[record_id] = _parse_score(row[column[extra]])
            except ValueError:
                problems.append((line, f"cannot parse {extra} {row[column[extra]]!r}"))
                continue
        traits = tuple(row[column[name]].strip() for name in features)
        records.append(ScoreRecord(id=record_id, traits=traits, raw_score=score))
    if problems:
        _fail(path, problems)
    if not records:
        raise DataError(f"{path}: no data rows")
    return records, extras


def load_population_csv(path, schema: Sequence[str] | None = None, score_column: str | None = None):
    """
    Read a scored population from CSV.

    The header must start with ``id``; the score column is ``score`` or ``raw_score``
    unless named explicitly. Without ``schema`` every other column (except
    ``fair_score``) is taken as a protected feature.

    Returns:
        (records, features)
    """
    header, rows = _read_rows(path)
    score_name = _score_column(path, header, score_column)
    features = _features(path, header, schema, {score_name, FAIR_COLUMN})
    records, _ = _parse_records(path, header, rows, features, score_name)
    logger.debug("loaded %d records from %s", len(records), path)
    return records, features


def load_repaired_csv(path, schema: Sequence[str] | None = None):
    """
    Read a repair output (``id, <traits>, raw_score, fair_score``).

    Returns:
        (records, features, fair scores by id)
    """
    header, rows = _read_rows(path)
    for name in ("raw_score", FAIR_COLUMN):
        if name not in header:
            _fail(path, [(1, f"missing column {name!r}")])
    features = _features(path, header, schema, {"raw_score", FAIR_COLUMN})
    records, fair = _parse_records(path, header, rows, features, "raw_score", extra=FAIR_COLUMN)
    return records, features, fair


def format_score(value: float) -> str:
    """Shortest text that parses back to the same float; integral scores without decimals."""
    value = float(value)
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _open_for_writing(path):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return open(path, "w", newline="", encoding="utf-8")
    except OSError as e:
        raise DataError(f"cannot write {path}: {e}") from None


def write_population_csv(path, records: Sequence[ScoreRecord], features: Sequence[str]):
    """Write ``id, <features>, score`` rows in id order."""
    with _open_for_writing(path) as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["id", *features, "score"])
        for record in sorted(records, key=lambda r: r.id):
            writer.writerow([record.id, *record.traits, format_score(record.raw_score)])
    logger.info("wrote %d records to %s", len(records), path)


def write_repair_csv(path, records: Sequence[ScoreRecord], fair_scores, features: Sequence[str]):
    """
    Write ``id, <features>, raw_score, fair_score`` rows in id order.

    Args:
        path: Output file.
        records: Repaired population.
        fair_scores: Mapping id -> fair score, or a sequence aligned with ``records``.
        features: Protected feature names for the header.
    """
    if isinstance(fair_scores, dict):
        missing = [r.id for r in records if r.id not in fair_scores]
        if missing:
            raise MissingScoreError(f"fair scores missing for {len(missing)} records, e.g. {missing[:3]}")
        fair = fair_scores
    else:
        values = list(fair_scores)
        if len(values) != len(records):
            raise MissingScoreError(f"expected {len(records)} fair scores, got {len(values)}")
        fair = {record.id: value for record, value in zip(records, values)}

    with _open_for_writing(path) as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["id", *features, "raw_score", FAIR_COLUMN])
        for record in sorted(records, key=lambda r: r.id):
            writer.writerow(
                [record.id, *record.traits, format_score(record.raw_score), format_score(fair[record.id])]
            )
    logger.info("wrote %d repaired records to %s", len(records), path)
