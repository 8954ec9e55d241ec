import csv
import json

import pytest

import experiment
import libsg as lib
from config import PRESETS, ExperimentConfig
from experiment import CSV_COLUMNS, run_experiment, run_seed


def small_config(out_dir) -> ExperimentConfig:
    config = ExperimentConfig()
    config.out_dir = str(out_dir)
    config.n = 80
    config.k = 10
    config.r = 24
    config.d = 4
    config.seeds = [0, 1]
    config.sample_factor = 1.0
    config.trial_budget = 2
    config.bound_target = -100.0
    config.recovery_target = None
    config.validate()
    return config


def read_rows(path) -> list[dict]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


####################################################################################################

def test_experiment_writes_results(tmp_path):
    config = small_config(tmp_path)
    summary = run_experiment(config)
    assert summary.passed, summary.failures
    assert summary.seeds == 2 and summary.errors == 0
    assert summary.invariant_failures == 0

    rows = read_rows(config.results_file)
    assert list(rows[0].keys()) == CSV_COLUMNS
    assert [row["seed"] for row in rows] == ["0", "1"]
    for row in rows:
        assert row["error"] == ""
        assert row["runtime_ms"] == ""
        assert row["constants_profile"] == "desk"
        # the clique-partition bound is a feasible-strategy bound on the LP value
        assert float(row["bound"]) <= float(row["lp_total"]) + 1e-6
        assert 0.0 <= float(row["frac_recovered"]) <= 1.0

    summary_file = lib.read_json_file(config.summary_file)
    assert summary_file["passed"] is True
    metadata = lib.read_json_file(config.metadata_file)
    assert set(metadata["runtime_ms"]) == {"0", "1"}
    assert metadata["config"]["n"] == 80


def test_results_are_reproducible(tmp_path):
    first = small_config(tmp_path / "first")
    second = small_config(tmp_path / "second")
    second.jobs = 2
    run_experiment(first)
    run_experiment(second)
    with open(first.results_file, "rb") as a, open(second.results_file, "rb") as b:
        assert a.read() == b.read()


def test_targets_gate_the_verdict(tmp_path):
    config = small_config(tmp_path)
    config.bound_target = 2.0
    summary = run_experiment(config)
    assert not summary.passed
    assert any("bound" in failure for failure in summary.failures)
    assert summary.fraction_bound_ok == 0.0


def test_errors_are_recorded_per_seed(tmp_path, monkeypatch):
    def failing(*args, **kwargs):
        raise lib.InvalidInputError("no graph today")

    monkeypatch.setattr(experiment, "gen_planted_cover", failing)
    config = small_config(tmp_path)
    outcome = run_seed(config, 0)
    assert outcome.row["error"] == "InvalidInputError: no graph today"

    summary = run_experiment(config)
    assert summary.errors == 2
    assert not summary.passed


def test_payoff_range_check(tmp_path):
    config = small_config(tmp_path)
    config.check_payoff_range = True
    config.d = 1
    config.run_recovery = False
    config.seeds = [0]
    summary = run_experiment(config)
    low, high = summary.payoff_range
    assert -2 * config.rho <= low and high <= 1
    assert json.dumps(summary.to_json())


@pytest.mark.slow
def test_smoke_preset(tmp_path):
    config = ExperimentConfig("smoke")
    PRESETS["smoke"](config)
    config.out_dir = str(tmp_path)
    summary = run_experiment(config)
    assert summary.errors == 0
    assert summary.invariant_failures == 0


@pytest.mark.slow
def test_clique_partition_bound_at_scale(tmp_path):
    # two seeds of the analysis regime; generation alone takes minutes
    config = ExperimentConfig("lemma3")
    PRESETS["lemma3"](config)
    config.out_dir = str(tmp_path)
    config.seeds = [0, 1]
    summary = run_experiment(config)
    assert summary.passed, summary.failures
    assert summary.mean_coverage >= 0.9
    assert summary.mean_bound >= 0.8
