import json

import pytest

from dualsim.config import (
    ConfigError,
    load_config,
    load_default_config,
    parse_config,
)


def minimal_config(**overrides):
    data = {
        "schema_version": 1,
        "arrival_profile": {"hourly_rates": [0.1] * 8},
        "service_model": {
            "job1_mean": 1.0, "job2_mean": 0.5, "job3_mean": 1.0, "dwell_mean": 5.0,
        },
        "scenarios": [
            {"id": "1", "assignment": {"1": "a", "2": "a", "3": "a"}},
            {"id": "2", "assignment": {"1": "a", "2": "b", "3": "a"}},
        ],
        "experiment": {"master_seed": 10},
    }
    data.update(overrides)
    return data


def test_minimal_config_fills_defaults():
    config = parse_config(minimal_config())
    assert config.service.help_probability == 0.10
    assert config.service.rooms == 8
    assert config.experiment.replications == 100
    assert config.experiment.alpha == 0.05
    assert config.experiment.master_seed == 10
    assert config.experiment.calibration is None
    assert config.experiment.validation.variance_similarity_threshold == 0.20
    assert [s.id for s in config.scenarios] == ["1", "2"]
    assert config.scenarios[0].abs_queue_discipline == "random_pick"
    assert config.profile.total_expected_arrivals == pytest.approx(48.0)


def test_shipped_default_config_loads():
    config = load_default_config()
    assert len(config.profile.segments) == 8
    assert [s.id for s in config.scenarios] == ["1", "2", "3"]
    assert config.scenarios[0].staff_count == 1
    assert config.scenarios[1].staff_count == 2
    assert config.scenarios[2].staff_count == 3
    assert config.experiment.calibration is not None
    assert config.experiment.calibration.mean_wait == pytest.approx(1.69)
    assert config.experiment.calibration.mean_time_in_system == pytest.approx(8.79)
    assert set(config.experiment.calibration.search_space) == {
        "job1_mean", "job3_mean", "dwell_mean",
    }
    # job2_mean deliberately stays out of the search
    assert "job2_mean" not in config.experiment.calibration.search_space


def test_all_problems_are_reported_together():
    data = minimal_config()
    data["schema_version"] = 2
    data["arrival_profile"]["hourly_rates"] = [0.1] * 7
    data["service_model"]["help_probability"] = 1.5
    data["scenarios"][0]["assignment"].pop("2")
    data["experiment"]["warmup"] = 10
    with pytest.raises(ConfigError) as excinfo:
        parse_config(data)
    message = str(excinfo.value)
    assert "5 configuration problem(s)" in message
    assert "schema_version" in message
    assert "hourly_rates" in message
    assert "help_probability" in message
    assert "job 2 has no staff assigned" in message
    assert "unknown key(s) warmup" in message
    assert len(excinfo.value.errors) == 5


def test_unknown_keys_are_rejected_everywhere():
    data = minimal_config()
    data["extra"] = 1
    data["service_model"]["speed"] = 2
    with pytest.raises(ConfigError) as excinfo:
        parse_config(data)
    assert any("extra" in e for e in excinfo.value.errors)
    assert any("speed" in e for e in excinfo.value.errors)


def test_notes_are_allowed_but_must_be_string_lists():
    data = minimal_config()
    data["notes"] = ["top level comment"]
    data["service_model"]["notes"] = ["fitted by hand"]
    data["scenarios"][0]["notes"] = ["reference staffing"]
    parse_config(data)  # no error

    data["service_model"]["notes"] = "not a list"
    with pytest.raises(ConfigError, match="list of strings"):
        parse_config(data)


def test_scenario_validation():
    data = minimal_config()
    data["scenarios"] = [
        {"id": "1", "assignment": {"1": "a", "2": "a", "3": "a"}},
        {"id": "1", "assignment": {"1": "a", "2": "a", "3": "a"}},
    ]
    with pytest.raises(ConfigError, match="duplicate scenario id"):
        parse_config(data)

    data["scenarios"] = [{"id": "1", "assignment": {"1": "a", "2": "a", "3": "a"},
                          "abs_queue_discipline": "sorted"}]
    with pytest.raises(ConfigError, match="abs_queue_discipline"):
        parse_config(data)

    data["scenarios"] = []
    with pytest.raises(ConfigError, match="non-empty list"):
        parse_config(data)

    data["scenarios"] = [{"id": "1", "assignment": {"1": "a", "2": "a", "3": "a",
                                                    "4": "a"}}]
    with pytest.raises(ConfigError, match="unknown job"):
        parse_config(data)


def test_integer_scenario_ids_become_strings():
    data = minimal_config()
    data["scenarios"] = [
        {"id": 1, "assignment": {"1": "a", "2": "a", "3": "a"}},
        {"id": 2, "assignment": {"1": "a", "2": "b", "3": "a"}},
    ]
    config = parse_config(data)
    assert [s.id for s in config.scenarios] == ["1", "2"]
    assert config.scenario("2").staff_count == 2


def test_scenario_lookup_reports_the_known_ids():
    config = parse_config(minimal_config())
    with pytest.raises(ConfigError, match="configured: 1, 2"):
        config.scenario("9")


def test_booleans_are_not_numbers():
    data = minimal_config()
    data["service_model"]["job1_mean"] = True
    data["experiment"]["replications"] = True
    with pytest.raises(ConfigError) as excinfo:
        parse_config(data)
    assert len(excinfo.value.errors) == 2


def test_experiment_bounds():
    data = minimal_config()
    data["experiment"]["alpha"] = 1.0
    with pytest.raises(ConfigError, match="alpha"):
        parse_config(data)

    data = minimal_config()
    del data["experiment"]["master_seed"]
    with pytest.raises(ConfigError, match="master_seed"):
        parse_config(data)

    data = minimal_config()
    data["experiment"]["replications"] = 0
    with pytest.raises(ConfigError, match="replications"):
        parse_config(data)


def test_calibration_section_parsing():
    data = minimal_config()
    data["experiment"]["calibration"] = {
        "targets": {"mean_wait": 1.7, "mean_time_in_system": 8.8},
        "budget": 10,
        "search_space": {"dwell_mean": [4.0, 6.0], "job1_mean": None},
    }
    config = parse_config(data)
    cal = config.experiment.calibration
    assert cal.budget == 10
    assert cal.replications == 30
    assert cal.master_seed == 42
    assert cal.search_space == {"dwell_mean": (4.0, 6.0), "job1_mean": None}


def test_calibration_search_space_validation():
    def with_space(space):
        data = minimal_config()
        data["experiment"]["calibration"] = {
            "targets": {"mean_wait": 1.0, "mean_time_in_system": 8.0},
            "search_space": space,
        }
        return data

    with pytest.raises(ConfigError, match="unknown parameter"):
        parse_config(with_space({"rooms": None}))
    with pytest.raises(ConfigError, match="low, high"):
        parse_config(with_space({"dwell_mean": [6.0, 4.0]}))
    with pytest.raises(ConfigError, match="low, high"):
        parse_config(with_space({"dwell_mean": [0.0, 4.0]}))
    with pytest.raises(ConfigError, match="non-empty object"):
        parse_config(with_space({}))


def test_calibration_requires_targets():
    data = minimal_config()
    data["experiment"]["calibration"] = {"budget": 5}
    with pytest.raises(ConfigError, match="targets"):
        parse_config(data)


def test_load_config_wraps_file_problems(tmp_path):
    missing = tmp_path / "nope.json"
    with pytest.raises(ConfigError, match="cannot read file"):
        load_config(missing)

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config(bad)

    good = tmp_path / "good.json"
    good.write_text(json.dumps(minimal_config()))
    config = load_config(good)
    assert config.source == str(good)


def test_top_level_must_be_an_object():
    with pytest.raises(ConfigError, match="JSON object"):
        parse_config([1, 2, 3])
