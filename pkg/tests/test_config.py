import pytest

from config import PRESETS, ExperimentConfig


def test_defaults_are_valid():
    config = ExperimentConfig()
    config.validate()
    assert config.num_cliques == 30
    assert config.recovery_params().d == config.d


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_are_valid(name):
    config = ExperimentConfig(name)
    PRESETS[name](config)
    config.validate()


def test_reference_constants():
    config = ExperimentConfig("lemma3")
    PRESETS["lemma3"](config)
    assert (config.n, config.k, config.num_cliques, config.d, config.rho) == (25000, 150, 500, 1, 1.0)
    assert config.constants_profile == "reference"
    assert config.rho * config.d == config.k / config.c

    config = ExperimentConfig("theorem1")
    PRESETS["theorem1"](config)
    assert (config.d, config.rho) == (1, 2.0)


def test_apply_ignores_unknown_keys(capsys):
    config = ExperimentConfig()
    config.apply({"n": 500, "graphs_dir": "/tmp", "no_such_option": 1}, source="test.toml")
    assert config.n == 500
    err = capsys.readouterr().err
    assert "no_such_option" in err and "graphs_dir" in err


@pytest.mark.parametrize("name, value", [
    ("p", 1.0), ("k", 1), ("d", 0), ("rho", -1.0), ("seeds", []), ("jobs", 0),
    ("density_slack", 1.0), ("recovery_target", 2.0), ("trial_budget", 0),
    ("constants_profile", "lab"),
])
def test_invalid_values(name, value):
    config = ExperimentConfig()
    setattr(config, name, value)
    with pytest.raises(ValueError):
        config.validate()


def test_config_is_serializable():
    data = ExperimentConfig("smoke").to_json()
    assert data["preset"] == "smoke"
    assert "graphs_dir" not in data
