import csv
import json

import pytest

from fairscore import __version__
from fairscore.cli import create_cli
from fairscore.commands import run_config, sha256_of
from fairscore.commands.repair import DISTRIBUTIONS_FILE, MANIFEST_FILE, REPAIRED_FILE, cmd_repair
from fairscore.errors import DataError, UsageError


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def read_manifest(out):
    return json.loads((out / MANIFEST_FILE).read_text(encoding="utf-8"))


def test_no_repair_copies_raw_scores(tmp_path, population_csv):
    cmd_repair(run_config(input=population_csv, theta=0.0, out=tmp_path / "out"))
    rows = read_rows(tmp_path / "out" / REPAIRED_FILE)
    assert len(rows) == 40
    assert list(rows[0]) == ["id", "gender", "ethnicity", "raw_score", "fair_score"]
    assert all(row["fair_score"] == row["raw_score"] for row in rows)


def test_full_repair_of_two_groups(tmp_path, two_groups_csv):
    summary = cmd_repair(run_config(input=two_groups_csv, theta=1.0, out=tmp_path))
    rows = read_rows(tmp_path / REPAIRED_FILE)
    assert [float(row["fair_score"]) for row in rows] == [25.0, 35.0, 45.0, 25.0, 35.0, 45.0]

    manifest = read_manifest(tmp_path)
    assert manifest["parity_gap"] <= manifest["repair"]["grid_tolerance"] + 1e-9
    assert summary["parity_gap"] == pytest.approx(manifest["parity_gap"], abs=1e-9)
    assert [g["theta"] for g in manifest["repair"]["groups"]] == [1.0, 1.0]
    assert [g["weight"] for g in manifest["repair"]["groups"]] == [0.5, 0.5]
    assert manifest["repair"]["barycenter"]["mean"] == pytest.approx(35.0)


def test_distributions_of_two_groups(tmp_path, two_groups_csv):
    summary = cmd_repair(run_config(input=two_groups_csv, theta=1.0, out=tmp_path))
    assert summary["distributions"] == str(tmp_path / DISTRIBUTIONS_FILE)
    rows = read_rows(tmp_path / DISTRIBUTIONS_FILE)
    first, second = "gender=0,ethnicity=0", "gender=1,ethnicity=0"
    columns = ["score", f"raw[{first}]", f"fair[{first}]", f"raw[{second}]", f"fair[{second}]", "barycenter"]
    assert list(rows[0]) == columns
    assert [float(row["score"]) for row in rows] == [10.5, 20.5, 25.5, 30.5, 35.5, 40.5, 45.5, 50.5, 60.5]
    for column in columns[1:]:
        assert sum(float(row[column]) for row in rows) == pytest.approx(1.0)

    # both groups land on the barycenter
    for row in rows:
        expected = 1 / 3 if float(row["score"]) in (25.5, 35.5, 45.5) else 0.0
        for column in (f"fair[{first}]", f"fair[{second}]", "barycenter"):
            assert float(row[column]) == pytest.approx(expected)


def test_distributions_without_repair_repeat_the_raw_histograms(tmp_path, population_csv):
    cmd_repair(run_config(input=population_csv, theta=0.0, out=tmp_path))
    rows = read_rows(tmp_path / DISTRIBUTIONS_FILE)
    raw_columns = [column for column in rows[0] if column.startswith("raw[")]
    assert raw_columns
    for row in rows:
        for column in raw_columns:
            assert row[column] == row["fair" + column[3:]]


def test_manifest_records_the_run(tmp_path, two_groups_csv):
    cmd_repair(run_config(input=two_groups_csv, theta=0.5, out=tmp_path / "out"))
    manifest = read_manifest(tmp_path / "out")
    assert manifest["version"] == __version__
    assert manifest["inputs"] == {str(two_groups_csv): sha256_of(two_groups_csv)}
    assert manifest["config"]["theta"] == 0.5
    assert manifest["config"]["input"] == str(two_groups_csv)


def test_group_override_changes_only_that_group(tmp_path, small_spec_file):
    base = dict(synthetic_spec=str(small_spec_file), theta=0.5)
    cmd_repair(run_config(**base, out=tmp_path / "base"))
    cmd_repair(run_config(**base, theta_groups=("ethnicity=2:1.0",), out=tmp_path / "override"))
    before = read_rows(tmp_path / "base" / REPAIRED_FILE)
    after = read_rows(tmp_path / "override" / REPAIRED_FILE)
    changed = {row["ethnicity"] for row, other in zip(before, after) if row["fair_score"] != other["fair_score"]}
    assert changed == {"2"}
    thetas = {tuple(g["key"]): g["theta"] for g in read_manifest(tmp_path / "override")["repair"]["groups"]}
    assert thetas[("0", "2")] == thetas[("1", "2")] == 1.0
    assert thetas[("0", "0")] == 0.5


def test_repeated_runs_are_identical(tmp_path, small_spec_file):
    for name in ("a", "b"):
        cmd_repair(run_config(synthetic_spec=str(small_spec_file), theta=0.7, out=tmp_path / name))
    assert (tmp_path / "a" / REPAIRED_FILE).read_bytes() == (tmp_path / "b" / REPAIRED_FILE).read_bytes()


def test_rounding(tmp_path, two_groups_csv):
    cmd_repair(run_config(input=two_groups_csv, theta=1 / 3, round_to=0, out=tmp_path))
    assert [row["fair_score"] for row in read_rows(tmp_path / REPAIRED_FILE)] == ["15", "25", "35", "35", "45", "55"]


def test_cli(tmp_path, two_groups_csv, runner):
    result = runner.invoke(
        create_cli(),
        ["repair", "--input", str(two_groups_csv), "--theta", "1", "--grid-size", "exact", "--out", str(tmp_path)],
    )
    assert result.exit_code == 0, result.output
    assert "Repaired 6 records in 2 groups" in result.output
    assert read_manifest(tmp_path)["repair"]["grid"] == "exact"


@pytest.mark.parametrize(
    "args",
    [
        ["--theta", "1.5"],
        ["--theta-group", "ethnicity=2"],
        ["--bin-width", "0"],
        ["--grid-size", "zero"],
    ],
)
def test_bad_flags_exit_with_usage_error(tmp_path, two_groups_csv, runner, args):
    result = runner.invoke(create_cli(), ["repair", "--input", str(two_groups_csv), "--out", str(tmp_path), *args])
    assert result.exit_code == 1


def test_input_and_spec_are_exclusive(tmp_path, two_groups_csv, small_spec_file):
    with pytest.raises(UsageError, match="mutually exclusive"):
        run_config(input=two_groups_csv, synthetic_spec=str(small_spec_file), out=tmp_path)


def test_missing_input(tmp_path, runner):
    with pytest.raises(DataError):
        cmd_repair(run_config(input=tmp_path / "nope.csv", out=tmp_path))
    result = runner.invoke(create_cli(), ["repair", "--input", str(tmp_path / "nope.csv"), "--out", str(tmp_path)])
    assert result.exit_code == 2
    assert "not found" in result.output
