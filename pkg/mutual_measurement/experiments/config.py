"""
:Description: Declarative experiment files: schemas, defaults and parsing.

An experiment file is a YAML mapping with the keys

- `experiment` (required): one of `ExperimentName`.
- `seed`: 64-bit master seed. Defaults to `DEFAULT_SEED`.
- `output_dir`: directory that receives the CSV files and `summary.json`. Defaults to `runs/<experiment>`.
- `unit_mode`: `si` or `nondimensional`. The default depends on the experiment (see `DEFAULT_UNIT_MODES`).
- `constants`: overrides of `c`, `hbar`, `G`, `kB`, `sigma_SB`. Only allowed in nondimensional mode.
- `parameters`: experiment parameters, validated against `PARAMETER_SCHEMAS[experiment]`. Missing parameters take
  their value from `PARAMETER_DEFAULTS[experiment]`.

Unknown keys are errors at every level.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import StrEnum
from pathlib import Path
from typing import Final, Optional, cast

import yaml
from jsonschema import Draft202012Validator

from mutual_measurement.experiments.exceptions import ConfigValidationError
from mutual_measurement.gravity.bodies import EARTH_MASS, EARTH_RADIUS, EARTH_SURFACE_AREA, EARTH_TEMPERATURE
from mutual_measurement.physics.constants import NONDIMENSIONAL, UnitMode, UnitSystem
from mutual_measurement.types import NORMALIZATION_TOLERANCE, JsonObjectType, JsonType, SchemaType
from mutual_measurement.utils.random import MAX_SEED

log: Final = logging.getLogger(__name__)


class ExperimentName(StrEnum):
    """
    Experiments that can be run from a configuration file.
    """

    MEASUREMENT_DEMO = "measurement-demo"
    DRIFT = "drift"
    HEATING = "heating"
    FRICTION = "friction"
    FP_VS_SDE = "fp-vs-sde"
    NEWTON_SWEEP = "newton-sweep"
    CONSISTENCY_REPORT = "consistency-report"
    APPENDIX_D = "appendix-d"
    SPREADING = "spreading"


#### Constants ####

# Documented default master seed. Runs are never seeded from the clock.
DEFAULT_SEED: Final[int] = 20200717

EXPERIMENT_DESCRIPTIONS: Final[dict[ExperimentName, str]] = {
    ExperimentName.MEASUREMENT_DEMO: "Four-stage density matrices of one mutual measurement and branch frequencies.",
    ExperimentName.DRIFT: "Fokker-Planck drift of the mean velocity against -dv^2 / (2 c tau).",
    ExperimentName.HEATING: "Fokker-Planck growth of the velocity variance against 2 <D>.",
    ExperimentName.FRICTION: "Friction-limited diffusion with a fixed or self-consistent environment velocity.",
    ExperimentName.FP_VS_SDE: "Fokker-Planck moments against a Monte Carlo ensemble of the same model.",
    ExperimentName.NEWTON_SWEEP: "Parameter chain over a grid of masses and distances against -G M / (2 r^2).",
    ExperimentName.CONSISTENCY_REPORT: "Recoil, photon budget, trembling temperature and validity checks of a body.",
    ExperimentName.APPENDIX_D: "Split-object center-of-mass variance against the unsplit body.",
    ExperimentName.SPREADING: "Free wave-packet width over time.",
}

DEFAULT_UNIT_MODES: Final[dict[ExperimentName, UnitMode]] = {
    ExperimentName.MEASUREMENT_DEMO: UnitMode.NONDIMENSIONAL,
    ExperimentName.DRIFT: UnitMode.NONDIMENSIONAL,
    ExperimentName.HEATING: UnitMode.NONDIMENSIONAL,
    ExperimentName.FRICTION: UnitMode.NONDIMENSIONAL,
    ExperimentName.FP_VS_SDE: UnitMode.NONDIMENSIONAL,
    ExperimentName.NEWTON_SWEEP: UnitMode.SI,
    ExperimentName.CONSISTENCY_REPORT: UnitMode.SI,
    ExperimentName.APPENDIX_D: UnitMode.NONDIMENSIONAL,
    ExperimentName.SPREADING: UnitMode.NONDIMENSIONAL,
}

_NUMBER: Final[SchemaType] = {"type": "number"}
_POSITIVE: Final[SchemaType] = {"type": "number", "exclusiveMinimum": 0}
_NON_NEGATIVE: Final[SchemaType] = {"type": "number", "minimum": 0}
_PROBABILITY: Final[SchemaType] = {"type": "number", "minimum": 0, "maximum": 1}


def _count(minimum: int) -> SchemaType:
    return {"type": "integer", "minimum": minimum}


def _object(properties: SchemaType) -> SchemaType:
    return {"type": "object", "properties": properties, "additionalProperties": False}


_DIFFUSION_PROPERTIES: Final[SchemaType] = {
    "dv_rms": _NON_NEGATIVE,
    "tau": _POSITIVE,
    "c": _POSITIVE,
    "t_end": _POSITIVE,
    "record_every": _POSITIVE,
    "v_mean0": _NUMBER,
    "v_sigma0": _POSITIVE,
    "n_cells": _count(16),
    "tolerance": _POSITIVE,
}
_FRICTION_PROPERTIES: Final[SchemaType] = {
    "gamma": _NON_NEGATIVE,
    "v0_mode": {"enum": ["fixed", "self-consistent"]},
    "v0": _NUMBER,
}
_ENSEMBLE_PROPERTIES: Final[SchemaType] = {
    "samples": _count(2),
    "sde_dt": _POSITIVE,
    "z_max": _POSITIVE,
}

PARAMETER_SCHEMAS: Final[dict[ExperimentName, SchemaType]] = {
    ExperimentName.MEASUREMENT_DEMO: _object(
        {"weight_f1": _PROBABILITY, "weight_f2": _PROBABILITY, "samples": _count(1)}
    ),
    ExperimentName.DRIFT: _object(_DIFFUSION_PROPERTIES),
    ExperimentName.HEATING: _object(_DIFFUSION_PROPERTIES),
    ExperimentName.FRICTION: _object({**_DIFFUSION_PROPERTIES, **_FRICTION_PROPERTIES}),
    ExperimentName.FP_VS_SDE: _object({**_DIFFUSION_PROPERTIES, **_FRICTION_PROPERTIES, **_ENSEMBLE_PROPERTIES}),
    ExperimentName.NEWTON_SWEEP: _object(
        {
            "masses": {"type": "array", "items": _POSITIVE, "minItems": 1},
            "radii": {"type": "array", "items": _POSITIVE, "minItems": 1},
        }
    ),
    ExperimentName.CONSISTENCY_REPORT: _object(
        {
            "mass": _POSITIVE,
            "density": _POSITIVE,
            "size": _POSITIVE,
            "temperature": _NON_NEGATIVE,
            "surface_area": _POSITIVE,
            "solid_angle": _NON_NEGATIVE,
            "omega": _POSITIVE,
            "separation": _POSITIVE,
            "observer_mass": _POSITIVE,
        }
    ),
    ExperimentName.APPENDIX_D: _object(
        {
            "total_mass": _POSITIVE,
            "alpha": _NON_NEGATIVE,
            "separation": _POSITIVE,
            "n_intervals": _count(1),
            "samples": _count(1),
            "cross_sigma": _NON_NEGATIVE,
        }
    ),
    ExperimentName.SPREADING: _object(
        {"sigma0": _POSITIVE, "mass": _POSITIVE, "t_end": _NON_NEGATIVE, "n_points": _count(2)}
    ),
}

_DIFFUSION_DEFAULTS: Final[JsonObjectType] = {
    "dv_rms": 1.0,
    "tau": 1.0,
    "t_end": 10.0,
    "record_every": 1.0,
    "v_mean0": 0.0,
    "v_sigma0": 0.5,
    "n_cells": 1024,
    "tolerance": 0.01,
}
_FRICTION_DEFAULTS: Final[JsonObjectType] = {"gamma": 0.1, "v0_mode": "fixed", "v0": 0.0}

PARAMETER_DEFAULTS: Final[dict[ExperimentName, JsonObjectType]] = {
    ExperimentName.MEASUREMENT_DEMO: {"weight_f1": 0.5, "weight_f2": 0.5, "samples": 100_000},
    ExperimentName.DRIFT: dict(_DIFFUSION_DEFAULTS),
    ExperimentName.HEATING: dict(_DIFFUSION_DEFAULTS),
    ExperimentName.FRICTION: {**_DIFFUSION_DEFAULTS, **_FRICTION_DEFAULTS, "t_end": 100.0, "tolerance": 0.02},
    ExperimentName.FP_VS_SDE: {
        **_DIFFUSION_DEFAULTS,
        **_FRICTION_DEFAULTS,
        "gamma": 0.0,
        "samples": 100_000,
        "sde_dt": 0.01,
        "z_max": 3.0,
    },
    ExperimentName.NEWTON_SWEEP: {"masses": [1.0e20, 1.0e21, 1.0e22, 1.0e23, 1.0e24], "radii": [EARTH_RADIUS]},
    ExperimentName.CONSISTENCY_REPORT: {
        "mass": EARTH_MASS,
        "temperature": EARTH_TEMPERATURE,
        "surface_area": EARTH_SURFACE_AREA,
        "solid_angle": 1.0e-9,
        "separation": EARTH_RADIUS,
        "observer_mass": 1.0,
    },
    ExperimentName.APPENDIX_D: {"total_mass": 1.0, "n_intervals": 10, "samples": 100_000, "cross_sigma": 0.0},
    ExperimentName.SPREADING: {"sigma0": 1.0, "mass": 1.0, "n_points": 101},
}

CONFIG_SCHEMA: Final[SchemaType] = {
    "type": "object",
    "properties": {
        "experiment": {"enum": [str(e) for e in ExperimentName]},
        "seed": {"type": "integer", "minimum": 0, "maximum": MAX_SEED},
        "output_dir": {"type": "string", "minLength": 1},
        "unit_mode": {"enum": [str(m) for m in UnitMode]},
        "constants": _object(
            {"c": _POSITIVE, "hbar": _POSITIVE, "G": _POSITIVE, "kB": _POSITIVE, "sigma_SB": _POSITIVE}
        ),
        "parameters": {"type": "object"},
    },
    "required": ["experiment"],
    "additionalProperties": False,
}

_DIFFUSION_EXPERIMENTS: Final[frozenset[ExperimentName]] = frozenset(
    {ExperimentName.DRIFT, ExperimentName.HEATING, ExperimentName.FRICTION, ExperimentName.FP_VS_SDE}
)
# Relative slack when checking that `t_end` is a whole number of recording intervals.
_INTERVAL_TOLERANCE: Final[float] = 1e-9


#### Types ####


@dataclass(frozen=True)
class ExperimentConfig:
    """
    A validated experiment description with every default filled in.
    """

    experiment: ExperimentName
    parameters: JsonObjectType
    seed: int = DEFAULT_SEED
    output_dir: str = "runs"
    unit_mode: UnitMode = UnitMode.NONDIMENSIONAL
    constants: dict[str, float] = field(default_factory=dict)

    @property
    def units(self) -> UnitSystem:
        """
        :returns: The unit system of the run, including any constant overrides.
        """
        if self.unit_mode == UnitMode.SI:
            return UnitSystem.si()
        return UnitSystem.nondimensional(NONDIMENSIONAL.with_overrides(**self.constants))

    def with_overrides(self, seed: Optional[int] = None, output_dir: Optional[str] = None) -> ExperimentConfig:
        """
        Applies command line overrides.

        :param seed: (Optional) Replacement master seed.
        :param output_dir: (Optional) Replacement output directory.
        :raises ConfigValidationError: If the seed is out of range.
        :returns: The updated configuration.
        """
        config = self
        if seed is not None:
            if not 0 <= seed <= MAX_SEED:
                raise ConfigValidationError([f"seed: {seed} is outside of [0, {MAX_SEED}]"])
            log.warning("Overriding the configured seed %d with %d", self.seed, seed)
            config = replace(config, seed=seed)
        if output_dir is not None:
            log.warning("Overriding the configured output directory `%s` with `%s`", self.output_dir, output_dir)
            config = replace(config, output_dir=output_dir)
        return config

    def to_json(self, include_output_dir: bool = True) -> JsonObjectType:
        """
        Renders the resolved configuration.

        :param include_output_dir: (Optional) Whether to include the output directory. Run summaries leave it out so
            that they do not depend on where a run was written.
        :returns: The configuration as a JSON object.
        """
        result: JsonObjectType = {
            "experiment": str(self.experiment),
            "seed": self.seed,
            "unit_mode": str(self.unit_mode),
            "constants": _null_non_finite(self.units.constants.to_json()),
            "parameters": _null_non_finite(self.parameters),
        }
        if include_output_dir:
            result["output_dir"] = self.output_dir
        return result


#### Functions ####


def _null_non_finite(value: JsonType) -> JsonType:
    """
    Replaces infinite and NaN numbers with `None`, which JSON can represent.
    """
    if isinstance(value, dict):
        return {k: _null_non_finite(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_null_non_finite(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _format_error_path(prefix: str, path: list[str | int]) -> str:
    parts: Final = [prefix] if prefix else []
    parts.extend(str(p) for p in path)
    return ".".join(parts) if parts else "<root>"


def _schema_errors(document: JsonType, schema: SchemaType, prefix: str = "") -> list[str]:
    validator: Final = Draft202012Validator(schema)
    errors: Final = sorted(validator.iter_errors(document), key=lambda e: [str(p) for p in e.absolute_path])
    return [f"{_format_error_path(prefix, list(e.absolute_path))}: {e.message}" for e in errors]


def _semantic_errors(experiment: ExperimentName, unit_mode: UnitMode, document: JsonObjectType) -> list[str]:
    """
    Cross-key rules that the schemas do not express.
    """
    errors: list[str] = []
    if "constants" in document and unit_mode != UnitMode.NONDIMENSIONAL:
        errors.append("constants: constant overrides are only allowed when `unit_mode` is `nondimensional`")
    parameters: Final = cast(JsonObjectType, document.get("parameters", {}))
    if experiment in _DIFFUSION_EXPERIMENTS:
        merged: Final = {**PARAMETER_DEFAULTS[experiment], **parameters}
        t_end: Final = cast(float, merged["t_end"])
        record_every: Final = cast(float, merged["record_every"])
        n_records: Final = round(t_end / record_every)
        if abs(n_records * record_every - t_end) > _INTERVAL_TOLERANCE * max(t_end, record_every):
            errors.append(f"parameters.t_end: {t_end} is not a whole multiple of `record_every` ({record_every})")
    if experiment == ExperimentName.MEASUREMENT_DEMO:
        weights: Final = {**PARAMETER_DEFAULTS[experiment], **parameters}
        total: Final = cast(float, weights["weight_f1"]) + cast(float, weights["weight_f2"])
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            errors.append(f"parameters.weight_f2: `weight_f1` + `weight_f2` must be 1, got {total}")
    if experiment == ExperimentName.APPENDIX_D and "alpha" in parameters and "separation" in parameters:
        errors.append("parameters: `alpha` and `separation` are mutually exclusive")
    return errors


def parse_config(text: str) -> ExperimentConfig:
    """
    Parses and validates an experiment file.

    :param text: YAML text of the experiment file.
    :raises ConfigValidationError: With every error found, each naming the offending key.
    :returns: The validated configuration, with defaults filled in.
    """
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigValidationError([f"<root>: malformed YAML: {e}"]) from e
    if not isinstance(document, dict):
        raise ConfigValidationError(["<root>: an experiment file must be a mapping"])

    errors: Final = _schema_errors(document, CONFIG_SCHEMA)
    try:
        experiment = ExperimentName(document.get("experiment"))
    except ValueError:
        # The top-level schema already reported the bad or missing name.
        raise ConfigValidationError(errors) from None

    parameters: Final = document.get("parameters", {})
    if isinstance(parameters, dict):
        errors.extend(_schema_errors(parameters, PARAMETER_SCHEMAS[experiment], "parameters"))
    unit_mode: Final = UnitMode(document["unit_mode"]) if "unit_mode" in document else DEFAULT_UNIT_MODES[experiment]
    if not errors:
        errors.extend(_semantic_errors(experiment, unit_mode, document))
    if errors:
        raise ConfigValidationError(errors)

    return ExperimentConfig(
        experiment=experiment,
        parameters={**PARAMETER_DEFAULTS[experiment], **parameters},
        seed=document.get("seed", DEFAULT_SEED),
        output_dir=document.get("output_dir", f"runs/{experiment}"),
        unit_mode=unit_mode,
        constants={k: float(v) for k, v in document.get("constants", {}).items()},
    )


def load_config(path: Path | str) -> ExperimentConfig:
    """
    Reads and parses an experiment file.

    :param path: Path to the file.
    :raises ConfigValidationError: If the file breaks its schema.
    :raises OSError: If the file cannot be read.
    :returns: The validated configuration.
    """
    return parse_config(Path(path).read_text(encoding="utf-8"))

