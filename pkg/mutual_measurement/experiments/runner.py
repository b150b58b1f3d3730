"""
:Description: Runs a validated experiment, writes its outputs and builds the run record.

Every run writes `summary.json` into the output directory. Diffusion experiments additionally write `moments.csv`
(and `moments_sde.csv` for `fp-vs-sde`), `newton-sweep` writes `newton_sweep.csv` and `spreading` writes
`spreading.csv`. Output paths are recorded relative to the output directory and no timestamps are written, so running
the same configuration twice produces byte-identical files.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Final, Optional, cast

import numpy as np
from scipy import stats

from mutual_measurement.diffusion.ensemble import gaussian_ensemble, variance_standard_error
from mutual_measurement.diffusion.evolve import evolve
from mutual_measurement.diffusion.exceptions import DiffusionException
from mutual_measurement.diffusion.grid import MomentRecord, default_grid, gaussian_distribution
from mutual_measurement.diffusion.models import (
    DiffusionModel,
    FrictionModel,
    V0Mode,
    stationary_mean,
    stationary_variance,
    theoretical_drift,
    theoretical_heating_rate,
)
from mutual_measurement.experiments.config import ExperimentConfig, ExperimentName
from mutual_measurement.experiments.exceptions import ExperimentRunError
from mutual_measurement.experiments.writers import (
    MOMENTS_FILE,
    MOMENTS_SDE_FILE,
    NEWTON_SWEEP_FILE,
    NEWTON_SWEEP_HEADER,
    SPREADING_FILE,
    SPREADING_HEADER,
    SUMMARY_FILE,
    write_csv,
    write_json,
    write_moments_csv,
)
from mutual_measurement.gravity.bodies import BodyPair, MacroObject, Which
from mutual_measurement.gravity.chain import (
    PREFACTOR_NOTE,
    chain_report,
    check_separation,
    fluctuation_time,
    measured_acceleration,
)
from mutual_measurement.gravity.consistency import (
    doubling_time,
    photon_budget,
    recoil_ratio,
    spatial_diffusion_coefficient,
    trembling_temperature,
    wavepacket_width,
)
from mutual_measurement.measurement.density_matrix import (
    BRANCH_BASIS,
    branch_frequencies,
    collapse_sample,
    decohere,
    entangle,
    initial_state,
    sample_branches,
)
from mutual_measurement.measurement.exceptions import MeasurementException
from mutual_measurement.multiobject.split import SplitScenario, com_variance_experiment
from mutual_measurement.physics.constants import (
    check_nonrelativistic,
    hawking_temperature,
    planck_length,
    planck_mass,
)
from mutual_measurement.physics.exceptions import InvalidParameterError, PhysicsException
from mutual_measurement.types import JsonObjectType, JsonType
from mutual_measurement.utils.fitting import fit_loglog_exponent, fit_slope
from mutual_measurement.utils.meta import get_package_version
from mutual_measurement.utils.random import SampleStreams, StreamPurpose

log: Final = logging.getLogger(__name__)

# Number of standard errors within which sampled frequencies must match their probabilities.
_FREQUENCY_Z_MAX: Final[float] = 3.0


@dataclass(frozen=True)
class RunRecord:
    """
    Everything a run produced: the resolved configuration, the package version, the summary values and the files
    written next to `summary.json`.
    """

    config: ExperimentConfig
    version: str
    summary: JsonObjectType
    outputs: list[str] = field(default_factory=list)

    def to_json(self) -> JsonObjectType:
        """
        :returns: The record as a JSON object. This is the content of `summary.json`.
        """
        return {
            "experiment": str(self.config.experiment),
            "version": self.version,
            "seed": self.config.seed,
            "config": self.config.to_json(include_output_dir=False),
            "summary": self.summary,
            "outputs": cast(JsonType, list(self.outputs)),
        }


# An experiment receives its configuration and output directory and returns its summary and the files it wrote.
_Experiment = Callable[[ExperimentConfig, Path], tuple[JsonObjectType, list[str]]]


def _param(config: ExperimentConfig, key: str) -> float:
    return float(cast(float, config.parameters[key]))


def _optional_param(config: ExperimentConfig, key: str) -> Optional[float]:
    value: Final = config.parameters.get(key)
    return None if value is None else float(cast(float, value))


def _relative_error(measured: float, expected: float) -> float:
    if expected == 0:
        return abs(measured)
    return abs(measured - expected) / abs(expected)


## Diffusion experiments ##


def _diffusion_model(config: ExperimentConfig) -> DiffusionModel:
    c: Final = _optional_param(config, "c")
    return DiffusionModel(
        dv_rms=_param(config, "dv_rms"),
        tau=_param(config, "tau"),
        c=config.units.c if c is None else c,
    )


def _friction_model(config: ExperimentConfig) -> Optional[FrictionModel]:
    if "gamma" not in config.parameters or _param(config, "gamma") == 0:
        return None
    return FrictionModel(
        gamma=_param(config, "gamma"),
        v0_mode=V0Mode(cast(str, config.parameters["v0_mode"])),
        v0=_param(config, "v0"),
    )


def _fp_records(
    config: ExperimentConfig, model: DiffusionModel, friction: Optional[FrictionModel]
) -> tuple[list[MomentRecord], JsonObjectType]:
    """
    Evolves the configured Gaussian with the Fokker-Planck solver on the default grid.
    """
    grid: Final = default_grid(
        model,
        friction,
        _param(config, "v_mean0"),
        _param(config, "v_sigma0"),
        _param(config, "t_end"),
        int(cast(int, config.parameters["n_cells"])),
    )
    initial: Final = gaussian_distribution(grid, _param(config, "v_mean0"), _param(config, "v_sigma0"))
    records: Final = evolve(
        initial, model, _param(config, "t_end"), _param(config, "record_every"), grid=grid, friction=friction
    )
    return records, grid.to_json()


def _drift_summary(model: DiffusionModel, records: list[MomentRecord], tolerance: float) -> JsonObjectType:
    fitted: Final = fit_slope([r.time for r in records], [r.mean for r in records])
    theory: Final = theoretical_drift(model)
    error: Final = _relative_error(fitted, theory)
    return {
        "fitted_drift": fitted,
        "theoretical_drift": theory,
        "drift_relative_error": error,
        "drift_within_tolerance": error <= tolerance,
    }


def _run_drift(config: ExperimentConfig, out_dir: Path) -> tuple[JsonObjectType, list[str]]:
    model: Final = _diffusion_model(config)
    records, grid = _fp_records(config, model, None)
    write_moments_csv(out_dir / MOMENTS_FILE, records)
    summary: Final = _drift_summary(model, records, _param(config, "tolerance"))
    summary.update({"model": model.to_json(), "grid": grid, "n_records": len(records)})
    return summary, [MOMENTS_FILE]


def _run_heating(config: ExperimentConfig, out_dir: Path) -> tuple[JsonObjectType, list[str]]:
    model: Final = _diffusion_model(config)
    records, grid = _fp_records(config, model, None)
    write_moments_csv(out_dir / MOMENTS_FILE, records)
    fitted: Final = fit_slope([r.time for r in records], [r.variance for r in records])
    theory: Final = float(np.mean([theoretical_heating_rate(model, r.mean) for r in records]))
    error: Final = _relative_error(fitted, theory)
    return {
        "fitted_heating_rate": fitted,
        "theoretical_heating_rate": theory,
        "heating_relative_error": error,
        "heating_within_tolerance": error <= _param(config, "tolerance"),
        "model": model.to_json(),
        "grid": grid,
        "n_records": len(records),
    }, [MOMENTS_FILE]


def _run_friction(config: ExperimentConfig, out_dir: Path) -> tuple[JsonObjectType, list[str]]:
    model: Final = _diffusion_model(config)
    friction: Final = _friction_model(config)
    if friction is None:
        raise InvalidParameterError("The friction experiment requires `gamma` > 0")
    records, grid = _fp_records(config, model, friction)
    write_moments_csv(out_dir / MOMENTS_FILE, records)
    tolerance: Final = _param(config, "tolerance")
    final: Final = records[-1]
    summary: JsonObjectType = {
        "model": model.to_json(),
        "friction": friction.to_json(),
        "grid": grid,
        "n_records": len(records),
        "width_valid": friction.width_is_valid(model, final.mean),
    }
    if friction.v0_mode == V0Mode.FIXED:
        mean_theory = stationary_mean(model, friction)
        variance_theory = stationary_variance(model, friction, final.mean)
        mean_error = _relative_error(final.mean, mean_theory)
        variance_error = _relative_error(final.variance, variance_theory)
        summary.update(
            {
                "stationary_mean": final.mean,
                "stationary_mean_theory": mean_theory,
                "stationary_mean_relative_error": mean_error,
                "stationary_variance": final.variance,
                "stationary_variance_theory": variance_theory,
                "stationary_variance_relative_error": variance_error,
                "within_tolerance": mean_error <= tolerance and variance_error <= tolerance,
            }
        )
    else:
        summary.update(_drift_summary(model, records, tolerance))
        deviation = max(
            _relative_error(r.variance, stationary_variance(model, friction, r.mean)) for r in records
        )
        summary.update(
            {
                "max_variance_deviation": deviation,
                "variance_pinned": deviation <= tolerance,
            }
        )
    return summary, [MOMENTS_FILE]


def family_wise_z(z_max: float, n_comparisons: int) -> float:
    """
    Converts a single-comparison z bound into the Bonferroni bound of a family of two-sided comparisons. The family
    keeps the false-alarm rate of a single `|z| <= z_max` check.

    :param z_max: Single-comparison bound, in standard errors.
    :param n_comparisons: Number of comparisons in the family.
    :returns: The family-wise bound. `z_max` itself for a family of at most one comparison.
    """
    if n_comparisons <= 1:
        return z_max
    alpha: Final = 2.0 * float(stats.norm.sf(z_max))
    return float(stats.norm.isf(alpha / (2.0 * n_comparisons)))


def _run_fp_vs_sde(config: ExperimentConfig, out_dir: Path) -> tuple[JsonObjectType, list[str]]:
    model: Final = _diffusion_model(config)
    friction: Final = _friction_model(config)
    fp_records, grid = _fp_records(config, model, friction)

    n_samples: Final = int(cast(int, config.parameters["samples"]))
    ensemble: Final = gaussian_ensemble(
        n_samples, _param(config, "v_mean0"), _param(config, "v_sigma0"), config.seed
    )
    sde_records: Final = evolve(
        ensemble,
        model,
        _param(config, "t_end"),
        _param(config, "record_every"),
        friction=friction,
        dt=_param(config, "sde_dt"),
    )
    write_moments_csv(out_dir / MOMENTS_FILE, fp_records)
    write_moments_csv(out_dir / MOMENTS_SDE_FILE, sde_records)

    # The initial record only compares two samplings of the same Gaussian; checkpoints start after it.
    z_mean: Final = [
        (sde.mean - fp.mean) / math.sqrt(sde.variance / n_samples) for fp, sde in zip(fp_records[1:], sde_records[1:])
    ]
    z_variance: Final = [
        (sde.variance - fp.variance) / variance_standard_error(fp.variance, n_samples)
        for fp, sde in zip(fp_records[1:], sde_records[1:])
    ]
    max_z_mean: Final = max((abs(z) for z in z_mean), default=0.0)
    max_z_variance: Final = max((abs(z) for z in z_variance), default=0.0)
    z_max: Final = _param(config, "z_max")
    n_comparisons: Final = len(z_mean) + len(z_variance)
    # `z_max` bounds the family of all mean and variance comparisons.
    z_critical: Final = family_wise_z(z_max, n_comparisons)
    return {
        "model": model.to_json(),
        "friction": None if friction is None else friction.to_json(),
        "grid": grid,
        "n_samples": n_samples,
        "n_checkpoints": len(z_mean),
        "z_mean": cast(JsonType, z_mean),
        "z_variance": cast(JsonType, z_variance),
        "max_abs_z_mean": max_z_mean,
        "max_abs_z_variance": max_z_variance,
        "n_comparisons": n_comparisons,
        "z_critical": z_critical,
        "comparisons_beyond_z_max": sum(1 for z in z_mean + z_variance if abs(z) > z_max),
        "within_z_max": max(max_z_mean, max_z_variance) <= z_critical,
    }, [MOMENTS_FILE, MOMENTS_SDE_FILE]


## Other experiments ##


def _run_measurement_demo(config: ExperimentConfig, _: Path) -> tuple[JsonObjectType, list[str]]:
    initial: Final = initial_state(_param(config, "weight_f1"), _param(config, "weight_f2"))
    entangled: Final = entangle(initial)
    decohered: Final = decohere(entangled)
    streams: Final = SampleStreams(config.seed, StreamPurpose.BRANCH_SAMPLING)
    collapsed, branch = collapse_sample(decohered, streams.generator(0))

    n_samples: Final = int(cast(int, config.parameters["samples"]))
    frequencies: Final = branch_frequencies(sample_branches(decohered, streams.generator(1), n_samples))
    probabilities: Final = decohered.probabilities
    support: Final = probabilities > 0
    sigma: Final = np.sqrt(probabilities * (1.0 - probabilities) / n_samples)
    with np.errstate(divide="ignore", invalid="ignore"):
        z: Final = np.where(sigma > 0, (frequencies - probabilities) / sigma, frequencies - probabilities)

    chi_squared: JsonType = None
    p_value: JsonType = None
    if int(np.count_nonzero(support)) >= 2:
        test: Final = stats.chisquare(frequencies[support] * n_samples, probabilities[support] * n_samples)
        chi_squared = float(test.statistic)
        p_value = float(test.pvalue)

    return {
        "stages": {
            str(s.stage): s.to_json() for s in (initial, entangled, decohered, collapsed)
        },
        "collapsed_branch": branch.label,
        "n_samples": n_samples,
        "probabilities": {b.label: float(p) for b, p in zip(BRANCH_BASIS, probabilities)},
        "frequencies": {b.label: float(f) for b, f in zip(BRANCH_BASIS, frequencies)},
        "max_abs_z": float(np.max(np.abs(z))),
        "frequencies_within_3_sigma": bool(np.all(np.abs(z) <= _FREQUENCY_Z_MAX)),
        "chi_squared": chi_squared,
        "chi_squared_p_value": p_value,
    }, []


def _run_newton_sweep(config: ExperimentConfig, out_dir: Path) -> tuple[JsonObjectType, list[str]]:
    k: Final = config.units.constants
    masses: Final = [float(m) for m in cast(list[float], config.parameters["masses"])]
    radii: Final = [float(r) for r in cast(list[float], config.parameters["radii"])]
    rows: list[tuple[float, float, float, float, float]] = []
    for mass in masses:
        for r in radii:
            a_measured = measured_acceleration(MacroObject(mass=mass), r, k)
            a_newton_half = -k.G * mass / (2.0 * r**2)
            rows.append((mass, r, a_measured, a_newton_half, a_measured / (-k.G * mass / r**2)))
    write_csv(out_dir / NEWTON_SWEEP_FILE, NEWTON_SWEEP_HEADER, rows)

    summary: JsonObjectType = {
        "n_rows": len(rows),
        "max_ratio_deviation": max(abs(row[4] - 0.5) for row in rows),
        "prefactor_note": PREFACTOR_NOTE,
        "mass_exponent": None,
        "distance_exponent": None,
    }
    if len(masses) >= 2:
        summary["mass_exponent"] = fit_loglog_exponent(
            masses, [measured_acceleration(MacroObject(mass=m), radii[0], k) for m in masses]
        )
    if len(radii) >= 2:
        summary["distance_exponent"] = fit_loglog_exponent(
            radii, [measured_acceleration(MacroObject(mass=masses[0]), r, k) for r in radii]
        )
    return summary, [NEWTON_SWEEP_FILE]


def _run_consistency_report(config: ExperimentConfig, _: Path) -> tuple[JsonObjectType, list[str]]:
    k: Final = config.units.constants
    body: Final = MacroObject(
        mass=_param(config, "mass"),
        density=_optional_param(config, "density"),
        size=_optional_param(config, "size"),
        temperature=_optional_param(config, "temperature"),
        surface_area=_optional_param(config, "surface_area"),
    )
    t_trembling: Final = trembling_temperature(body.mass, k)
    t_hawking: Final = hawking_temperature(body.mass, k)
    summary: JsonObjectType = {
        "body": body.to_json(),
        "planck_length": planck_length(k),
        "planck_mass": planck_mass(k),
        "nonrelativistic": check_nonrelativistic(body.mass, k).to_json(),
        "fluctuation_time": fluctuation_time(body.mass, planck_length(k), k),
        "trembling_temperature": t_trembling,
        "hawking_temperature": t_hawking,
        "trembling_to_hawking_ratio": t_trembling / t_hawking,
        "spatial_diffusion_coefficient": spatial_diffusion_coefficient(body.mass, k),
        "recoil_ratio": None,
        "photon_budget": None,
        "chain": None,
        "separation_check": None,
    }
    omega: Final = _optional_param(config, "omega")
    if body.density is not None and body.size is not None and (omega is not None or body.temperature is not None):
        summary["recoil_ratio"] = recoil_ratio(body, k, omega)
    if body.temperature is not None and body.surface_area is not None:
        summary["photon_budget"] = photon_budget(body, _param(config, "solid_angle"), k).to_json()
    separation: Final = _optional_param(config, "separation")
    if separation is not None:
        pair = BodyPair(a=body, b=MacroObject(mass=_param(config, "observer_mass")), separation=separation)
        summary["chain"] = chain_report(pair, Which.A, k).to_json()
        summary["separation_check"] = check_separation(pair, k).to_json()
    return summary, []


def _run_appendix_d(config: ExperimentConfig, _: Path) -> tuple[JsonObjectType, list[str]]:
    total_mass: Final = _param(config, "total_mass")
    n_intervals: Final = int(cast(int, config.parameters["n_intervals"]))
    samples: Final = int(cast(int, config.parameters["samples"]))
    cross_sigma: Final = _param(config, "cross_sigma")
    separation: Final = _optional_param(config, "separation")
    if separation is not None:
        scenario = SplitScenario.from_separation(
            total_mass, separation, config.units.constants, n_intervals, samples, config.seed, cross_sigma
        )
    else:
        alpha = _optional_param(config, "alpha")
        scenario = SplitScenario(
            total_mass, 1.0 if alpha is None else alpha, n_intervals, samples, config.seed, cross_sigma
        )
    result: Final = com_variance_experiment(scenario)
    summary: Final = result.to_json()
    summary.update(
        {
            "alpha": scenario.alpha,
            "within_3_sigma": abs(result.z_score) <= 3.0,
            "naive_gap": None if result.naive_variance == 0 else result.predicted / result.naive_variance,
        }
    )
    return summary, []


def _run_spreading(config: ExperimentConfig, out_dir: Path) -> tuple[JsonObjectType, list[str]]:
    k: Final = config.units.constants
    sigma0: Final = _param(config, "sigma0")
    mass: Final = _param(config, "mass")
    t_double: Final = doubling_time(sigma0, mass, k)
    t_end_param: Final = _optional_param(config, "t_end")
    t_end: Final = 2.0 * t_double if t_end_param is None else t_end_param
    times: Final = np.linspace(0.0, t_end, int(cast(int, config.parameters["n_points"])))
    widths: Final = [wavepacket_width(sigma0, mass, float(t), k) for t in times]
    write_csv(out_dir / SPREADING_FILE, SPREADING_HEADER, [(float(t), w) for t, w in zip(times, widths)])
    width_at_doubling: Final = wavepacket_width(sigma0, mass, t_double, k)
    return {
        "doubling_time": t_double,
        "width_at_doubling": width_at_doubling,
        "width_ratio_at_doubling": width_at_doubling / sigma0,
        "spreading_velocity": k.hbar / (mass * sigma0),
        "spatial_diffusion_coefficient": spatial_diffusion_coefficient(mass, k),
        "t_end": t_end,
        "final_width": widths[-1],
    }, [SPREADING_FILE]


_EXPERIMENTS: Final[dict[ExperimentName, _Experiment]] = {
    ExperimentName.MEASUREMENT_DEMO: _run_measurement_demo,
    ExperimentName.DRIFT: _run_drift,
    ExperimentName.HEATING: _run_heating,
    ExperimentName.FRICTION: _run_friction,
    ExperimentName.FP_VS_SDE: _run_fp_vs_sde,
    ExperimentName.NEWTON_SWEEP: _run_newton_sweep,
    ExperimentName.CONSISTENCY_REPORT: _run_consistency_report,
    ExperimentName.APPENDIX_D: _run_appendix_d,
    ExperimentName.SPREADING: _run_spreading,
}


def run(config: ExperimentConfig) -> RunRecord:
    """
    Runs an experiment and writes its outputs into `config.output_dir`.

    :param config: Validated configuration.
    :raises ExperimentRunError: If a numerical module rejects the configuration or fails during the run.
    :raises OSError: If the outputs cannot be written.
    :returns: The run record, also written to `summary.json`.
    """
    out_dir: Final = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    log.debug("Running `%s` with seed %d into %s", config.experiment, config.seed, out_dir)
    try:
        summary, outputs = _EXPERIMENTS[config.experiment](config, out_dir)
        record = RunRecord(config=config, version=get_package_version(), summary=summary, outputs=outputs)
        # Non-finite summary values raise `ValueError` before anything is written.
        write_json(out_dir / SUMMARY_FILE, record.to_json())
    except (PhysicsException, DiffusionException, MeasurementException, ValueError) as e:
        raise ExperimentRunError(str(config.experiment), e) from e
    return record
