"""Tests for the command-line interface."""

import csv
import json
import math

import pytest

from config.config import Settings
from src.app import EXIT_OK, EXIT_USAGE, UvaaApp
from src.beamforming import direction_grid
from src.commands import load_solution
from src.energy import SolutionShapeError
from src.scenario import ScenarioParseError, load_scenario

OPTIMIZE_FILES = {
    "archive.json",
    "convergence.csv",
    "thresholds.csv",
    "manifest.json",
    "selected.json",
}


@pytest.fixture
def app(capsys):
    """App whose stderr sink is bound to the captured stream."""
    return UvaaApp(Settings(log_level="WARNING", threads=1, _env_file=None))


def optimize_args(scenario_file, out, *extra):
    return [
        "optimize",
        "--scenario",
        str(scenario_file),
        "--pop",
        "4",
        "--iters",
        "3",
        "--seed",
        "5",
        "--out",
        str(out),
        *extra,
    ]


class TestLoadSolution:
    """Test solution file loading."""

    def test_plain_solution(self, solution_file, original_solution):
        solution = load_solution(solution_file)
        assert solution.receivers.tolist() == original_solution.receivers.tolist()

    def test_archive_entry_accepted(self, tmp_path, original_solution):
        path = tmp_path / "entry.json"
        path.write_text(json.dumps({"solution": original_solution.to_dict()}))
        assert load_solution(path).positions.shape == original_solution.positions.shape

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioParseError, match="not found"):
            load_solution(tmp_path / "nope.json")

    def test_not_an_object(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        with pytest.raises(SolutionShapeError):
            load_solution(path)


class TestParsing:
    """Test argument handling and exit codes."""

    def test_no_command(self, app):
        assert app.run([]) == EXIT_USAGE

    def test_version(self, app, capsys):
        assert app.run(["--version"]) == EXIT_OK
        assert "uvaa-secure" in capsys.readouterr().out

    def test_unknown_algorithm(self, app, scenario_file, tmp_path):
        args = optimize_args(scenario_file, tmp_path / "run", "--algo", "nsga2")
        assert app.run(args) == EXIT_USAGE

    def test_missing_scenario(self, app, tmp_path, capsys):
        missing = tmp_path / "missing.json"
        code = app.run(["baseline", "--scenario", str(missing), "--out", str(tmp_path / "o")])
        assert code == EXIT_USAGE
        assert str(missing) in capsys.readouterr().err

    def test_solution_shape_mismatch(self, app, scenario_file, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(
            json.dumps(
                {
                    "positions": [[[0.0, 0.0, 100.0]] * 3] * 2,
                    "weights": [[1.0] * 3] * 2,
                    "receivers": [0, 0],
                }
            )
        )
        code = app.run(["evaluate", "--scenario", str(scenario_file), "--solution", str(bad)])
        assert code == EXIT_USAGE


class TestGenerate:
    def test_writes_loadable_scenario(self, app, tmp_path, capsys):
        output = tmp_path / "generated.json"
        args = ["generate", "--seed", "1", "--n-uav", "4", "--known", "1", "--unknown", "0"]
        assert app.run([*args, "--output", str(output)]) == EXIT_OK

        scenario = load_scenario(output)
        assert scenario.n_uav == 4
        assert len(scenario.known_eavesdroppers) == 1
        assert str(output) in capsys.readouterr().out

    def test_same_seed_same_file(self, app, tmp_path):
        for name in ("a.json", "b.json"):
            app.run(["generate", "--seed", "9", "--n-uav", "4", "--output", str(tmp_path / name)])
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


class TestOptimize:
    """Test the optimize command end to end."""

    @pytest.mark.integration
    def test_writes_run_artifacts(self, app, scenario_file, tmp_path, capsys):
        out = tmp_path / "run"
        assert app.run(optimize_args(scenario_file, out, "--grid-deg", "10")) == EXIT_OK

        assert OPTIMIZE_FILES <= {p.name for p in out.iterdir()}
        assert capsys.readouterr().out.startswith("f1_bps=")
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["algorithm"] == "moalo-rsi"
        assert set(manifest["artifacts"]) >= {"archive.json", "selected.json"}

    @pytest.mark.integration
    def test_manifest_records_grid_override(self, app, scenario_file, tmp_path):
        out = tmp_path / "run"
        assert app.run(optimize_args(scenario_file, out, "--grid-deg", "9")) == EXIT_OK

        params = json.loads((out / "manifest.json").read_text())["params"]
        assert params["grid_deg"] == 9.0
        assert params["array"]["d_theta"] == pytest.approx(math.radians(9.0))
        assert params["array"]["d_phi"] == pytest.approx(math.radians(9.0))
        assert params["population_size"] == 4

    @pytest.mark.integration
    def test_runs_are_reproducible(self, app, scenario_file, tmp_path, monkeypatch):
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
        for name in ("a", "b"):
            app.run(optimize_args(scenario_file, tmp_path / name))
        for artifact in ("archive.json", "convergence.csv", "thresholds.csv"):
            first = (tmp_path / "a" / artifact).read_bytes()
            assert first == (tmp_path / "b" / artifact).read_bytes()

    @pytest.mark.integration
    def test_thread_count_does_not_change_results(self, app, scenario_file, tmp_path):
        app.run(optimize_args(scenario_file, tmp_path / "one", "--threads", "1"))
        app.run(optimize_args(scenario_file, tmp_path / "four", "--threads", "4"))
        first = (tmp_path / "one" / "archive.json").read_bytes()
        assert first == (tmp_path / "four" / "archive.json").read_bytes()

    def test_linear_baseline_as_algorithm(self, app, scenario_file, tmp_path):
        out = tmp_path / "laa"
        assert app.run(optimize_args(scenario_file, out, "--algo", "laa")) == EXIT_OK
        assert len(json.loads((out / "archive.json").read_text())) == 1


class TestEvaluate:
    def test_original_positions_cost_nothing(self, app, scenario_file, solution_file, capsys):
        args = ["evaluate", "--scenario", str(scenario_file), "--solution", str(solution_file)]
        assert app.run(args) == EXIT_OK
        out = capsys.readouterr().out
        assert "f3_j=0.0 " in out
        assert '"secrecy_all"' in out

    def test_writes_evaluation_file(self, app, scenario_file, solution_file, tmp_path):
        out = tmp_path / "eval"
        args = ["evaluate", "--scenario", str(scenario_file), "--solution", str(solution_file)]
        assert app.run([*args, "--out", str(out)]) == EXIT_OK
        payload = json.loads((out / "evaluation.json").read_text())
        assert set(payload) == {"objectives", "secrecy_all"}

    def test_manifest_records_grid_override(self, app, scenario_file, solution_file, tmp_path):
        out = tmp_path / "eval"
        args = ["evaluate", "--scenario", str(scenario_file), "--solution", str(solution_file)]
        assert app.run([*args, "--grid-deg", "8", "--out", str(out)]) == EXIT_OK

        params = json.loads((out / "manifest.json").read_text())["params"]
        assert params["grid_deg"] == 8.0
        assert params["array"]["d_theta"] == pytest.approx(math.radians(8.0))


class TestPattern:
    def test_one_row_per_direction(
        self, app, scenario_file, solution_file, small_scenario, tmp_path
    ):
        out = tmp_path / "pattern"
        args = ["pattern", "--scenario", str(scenario_file), "--solution", str(solution_file)]
        assert app.run([*args, "--out", str(out)]) == EXIT_OK

        grid = direction_grid(small_scenario.array.d_theta, small_scenario.array.d_phi)
        for name in ("pattern_uvaa1.csv", "pattern_uvaa2.csv"):
            with (out / name).open() as handle:
                rows = list(csv.reader(handle))
            assert len(rows) - 1 == grid.size


class TestRobustness:
    def test_row_per_trial(self, app, scenario_file, solution_file, tmp_path, capsys):
        out = tmp_path / "mc"
        args = [
            "robustness",
            "--scenario",
            str(scenario_file),
            "--solution",
            str(solution_file),
            "--kind",
            "jitter",
            "--drift",
            "1.0",
            "--trials",
            "6",
            "--out",
            str(out),
        ]
        assert app.run(args) == EXIT_OK

        with (out / "robustness.csv").open() as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["trial", "f1_bps", "f2_db"]
        assert len(rows) == 7
        summary = json.loads((out / "robustness_summary.json").read_text())
        assert summary["spec"]["drift"] == 1.0
        assert capsys.readouterr().out.startswith("trials=6 ")

    def test_bad_codebook_is_usage_error(self, app, scenario_file, solution_file, tmp_path):
        args = [
            "robustness",
            "--scenario",
            str(scenario_file),
            "--solution",
            str(solution_file),
            "--kind",
            "csi",
            "--codebook",
            "12",
            "--out",
            str(tmp_path / "mc"),
        ]
        assert app.run(args) == EXIT_USAGE


class TestBaseline:
    def test_writes_solution(self, app, scenario_file, tmp_path, capsys):
        out = tmp_path / "base"
        assert app.run(["baseline", "--scenario", str(scenario_file), "--out", str(out)]) == 0
        entry = json.loads((out / "baseline_solution.json").read_text())
        assert {"solution", "objectives"} <= set(entry)
        assert "feasible=" in capsys.readouterr().out

    def test_manifest_records_scenario_grid(self, app, scenario_file, small_scenario, tmp_path):
        out = tmp_path / "base"
        app.run(["baseline", "--scenario", str(scenario_file), "--out", str(out)])
        params = json.loads((out / "manifest.json").read_text())["params"]
        assert params["grid_deg"] is None
        assert params["array"]["d_theta"] == pytest.approx(small_scenario.array.d_theta)
