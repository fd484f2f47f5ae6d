import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from kmslab.cli import main
from kmslab.scenario import load_bundled_scenario


@pytest.fixture
def runner():
    return CliRunner()


def write_scenario(tmp_path, name, **overrides) -> Path:
    cfg = load_bundled_scenario(name).model_dump(by_alias=True, exclude_none=True)
    cfg.update(overrides)
    path = tmp_path / f"{cfg['name']}.json"
    path.write_text(json.dumps(cfg))
    return path


SMALL = {
    "schema_version": 1,
    "name": "small",
    "fock": {"dim": 6, "beta": 1.0, "g": {"kind": "linear"}},
    "x": {"kind": "ladder_power", "m": 1},
    "lambda": "auto",
    "seed": 11,
    "checks": ["conservativeness", "generator_spectrum"],
}


class TestRunCommand:
    def test_passing_run_writes_reports_and_spectra(self, runner, tmp_path):
        cfg = tmp_path / "small.json"
        cfg.write_text(json.dumps(SMALL))
        out = tmp_path / "out"
        result = runner.invoke(main, ["run", str(cfg), "--out", str(out)])
        assert result.exit_code == 0, result.output
        reports = json.loads((out / "small_reports.json").read_text())
        assert reports["scenario"] == "small"
        assert [r["status"] for r in reports["reports"]] == ["pass", "pass"]
        spectrum = (out / "small_generator_spectrum.csv").read_text().splitlines()
        assert spectrum[0] == "index,eigenvalue"
        assert len(spectrum) - 1 == 36  # dim^2 rows

    def test_failing_scenario_exits_one(self, runner, tmp_path):
        cfg = write_scenario(tmp_path, "negative_control")
        result = runner.invoke(main, ["run", str(cfg), "--out", str(tmp_path / "o")])
        assert result.exit_code == 1

    def test_parse_error_exits_two(self, runner, tmp_path):
        bad = tmp_path / "broken.json"
        bad.write_text("{not json")
        result = runner.invoke(main, ["run", str(bad)])
        assert result.exit_code == 2

    def test_validation_error_exits_three(self, runner, tmp_path):
        cfg = tmp_path / "invalid.json"
        cfg.write_text(json.dumps(dict(SMALL, unknown_field=1)))
        result = runner.invoke(main, ["run", str(cfg)])
        assert result.exit_code == 3

    def test_csv_format(self, runner, tmp_path):
        cfg = tmp_path / "small.json"
        cfg.write_text(json.dumps(SMALL))
        out = tmp_path / "out"
        result = runner.invoke(main, ["run", str(cfg), "--out", str(out), "--format", "csv"])
        assert result.exit_code == 0
        header = (out / "small_reports.csv").read_text().splitlines()[0]
        assert header.startswith("check,status,claim")

    def test_seed_determinism_in_written_json(self, runner, tmp_path):
        cfg = tmp_path / "small.json"
        cfg.write_text(json.dumps(SMALL))
        outputs = []
        for sub in ("a", "b"):
            out = tmp_path / sub
            result = runner.invoke(main, ["run", str(cfg), "--out", str(out), "--seed", "5"])
            assert result.exit_code == 0
            doc = json.loads((out / "small_reports.json").read_text())
            for rec in doc["reports"]:
                rec.pop("wall_time_s")
            outputs.append(doc)
        assert outputs[0] == outputs[1]


class TestCatalogCommands:
    def test_list_checks(self, runner):
        result = runner.invoke(main, ["list-checks"])
        assert result.exit_code == 0
        assert "conservativeness:" in result.output
        assert "markov:" in result.output

    def test_describe(self, runner):
        result = runner.invoke(main, ["describe", "heat_trace_bound"])
        assert result.exit_code == 0
        assert "claim:" in result.output

    def test_describe_unknown(self, runner):
        result = runner.invoke(main, ["describe", "not_a_check"])
        assert result.exit_code == 3
