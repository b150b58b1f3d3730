"""
:Description: Tests parsing and validation of experiment files.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import pytest

from mutual_measurement.experiments.config import (
    DEFAULT_SEED,
    DEFAULT_UNIT_MODES,
    PARAMETER_DEFAULTS,
    PARAMETER_SCHEMAS,
    ExperimentName,
    parse_config,
)
from mutual_measurement.experiments.exceptions import ConfigValidationError
from mutual_measurement.physics.constants import NONDIMENSIONAL, UnitMode
from mutual_measurement.utils.random import MAX_SEED
from tests.file_loading import get_shipped_configs_path, load_config_file


def test_minimal_config_takes_defaults() -> None:
    """
    Unset keys fall back to their documented defaults.
    """
    config = load_config_file("drift_minimal.yaml")
    assert config.experiment == ExperimentName.DRIFT
    assert config.seed == DEFAULT_SEED
    assert config.output_dir == "runs/drift"
    assert config.unit_mode == UnitMode.NONDIMENSIONAL
    assert config.parameters["c"] == 100.0
    assert config.parameters["record_every"] == 1.0
    assert config.parameters["n_cells"] == 1024


@pytest.mark.parametrize(
    "file,prefix,fragment",
    [
        ("drift_typo.yaml", "parameters:", "dvrms"),
        ("drift_negative_tau.yaml", "parameters.tau:", "minimum"),
        ("unknown_experiment.yaml", "experiment:", "teleport"),
        ("not_a_mapping.yaml", "<root>:", "mapping"),
        ("si_constants.yaml", "constants:", "nondimensional"),
        ("misaligned_records.yaml", "parameters.t_end:", "record_every"),
        ("appendix_d_both.yaml", "parameters:", "mutually exclusive"),
        ("drift_zero_duration.yaml", "parameters.t_end:", "minimum"),
        ("measurement_bad_weights.yaml", "parameters.weight_f2:", "must be 1"),
    ],
)
def test_invalid_config_names_key(file: str, prefix: str, fragment: str) -> None:
    """
    Each invalid file is rejected with an error naming the offending key.

    :param file: Experiment file to parse
    :param prefix: Expected key path of the error
    :param fragment: Expected fragment of the error message
    """
    with pytest.raises(ConfigValidationError) as e:
        load_config_file(file)
    assert len(e.value.errors) == 1
    assert e.value.errors[0].startswith(prefix)
    assert fragment in e.value.errors[0]


def test_every_error_reported() -> None:
    """
    Validation collects all errors instead of stopping at the first.
    """
    with pytest.raises(ConfigValidationError) as e:
        load_config_file("many_errors.yaml")
    errors = e.value.errors
    assert len(errors) == 5
    assert any("colour" in err for err in errors)
    assert any(err.startswith("seed:") for err in errors)
    assert any(err.startswith("parameters.dv_rms:") for err in errors)
    assert any(err.startswith("parameters.tau:") for err in errors)
    assert any(err.startswith("parameters.n_cells:") for err in errors)


def test_malformed_yaml() -> None:
    """
    YAML syntax errors become validation errors.
    """
    with pytest.raises(ConfigValidationError) as e:
        parse_config("experiment: [drift\n")
    assert e.value.errors[0].startswith("<root>: malformed YAML")


def test_nondimensional_constant_overrides() -> None:
    """
    Nondimensional runs may override constants; the rest keep their nondimensional defaults.
    """
    config = load_config_file("nondimensional_overrides.yaml")
    assert config.seed == 7
    assert config.output_dir == "/tmp/spreading"
    assert config.units.constants.hbar == 2.0
    assert config.units.constants.c == NONDIMENSIONAL.c
    assert config.to_json()["constants"]["hbar"] == 2.0  # type: ignore[index]


def test_with_overrides() -> None:
    """
    Command line overrides replace the seed and output directory.
    """
    config = load_config_file("drift_minimal.yaml").with_overrides(seed=3, output_dir="elsewhere")
    assert config.seed == 3
    assert config.output_dir == "elsewhere"
    with pytest.raises(ConfigValidationError):
        config.with_overrides(seed=MAX_SEED + 1)


def test_to_json() -> None:
    """
    The rendered configuration optionally omits the output directory.
    """
    config = load_config_file("drift_minimal.yaml")
    rendered = config.to_json()
    assert rendered["experiment"] == "drift"
    assert rendered["unit_mode"] == "nondimensional"
    assert rendered["output_dir"] == "runs/drift"
    assert "output_dir" not in config.to_json(include_output_dir=False)


def test_tables_cover_every_experiment() -> None:
    """
    Every experiment has a schema, defaults and a default unit mode.
    """
    for experiment in ExperimentName:
        assert experiment in PARAMETER_SCHEMAS
        assert experiment in PARAMETER_DEFAULTS
        assert experiment in DEFAULT_UNIT_MODES


@pytest.mark.parametrize("path", sorted(get_shipped_configs_path().glob("*.yaml")), ids=lambda p: p.name)
def test_shipped_configs_are_valid(path: Path) -> None:
    """
    Every experiment file shipped with the project validates.

    :param path: Shipped experiment file
    """
    parse_config(path.read_text(encoding="utf-8"))


def test_to_json_nulls_infinite_values() -> None:
    """
    An infinite speed of light is echoed as `None`, so the rendered configuration stays valid JSON.
    """
    config = load_config_file("drift_infinite_c.yaml")
    assert config.parameters["c"] == math.inf
    rendered = config.to_json()
    assert rendered["parameters"]["c"] is None  # type: ignore[index]
    assert rendered["parameters"]["dv_rms"] == 1.0  # type: ignore[index]
    json.dumps(rendered, allow_nan=False)


@pytest.mark.parametrize(
    "weight_f1,weight_f2",
    [
        (0.3, 0.7),
        (1.0, 0.0),
    ],
)
def test_measurement_weights_summing_to_one(weight_f1: float, weight_f2: float) -> None:
    """
    Weights that sum to 1 up to rounding are accepted.

    :param weight_f1: Weight of the first branch
    :param weight_f2: Weight of the second branch
    """
    config = parse_config(
        f"experiment: measurement-demo\nparameters:\n  weight_f1: {weight_f1}\n  weight_f2: {weight_f2}\n"
    )
    assert config.parameters["weight_f1"] == weight_f1
