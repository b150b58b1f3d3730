"""
:Description: Tests running experiments end to end.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import pytest

from mutual_measurement.experiments.config import ExperimentConfig, parse_config
from mutual_measurement.experiments.exceptions import ExperimentRunError
from mutual_measurement.experiments.runner import family_wise_z, run
from mutual_measurement.experiments.writers import (
    MOMENTS_FILE,
    MOMENTS_SDE_FILE,
    NEWTON_SWEEP_FILE,
    SPREADING_FILE,
    SUMMARY_FILE,
)
from mutual_measurement.physics.exceptions import DomainViolationError
from tests.file_loading import get_shipped_configs_path, load_config_file


def _shipped(name: str, out_dir: Path) -> ExperimentConfig:
    """
    Loads a shipped experiment file and redirects its output.

    :param name: File name under `configs/`
    :param out_dir: Output directory
    :returns: The configuration
    """
    text = (get_shipped_configs_path() / name).read_text(encoding="utf-8")
    return parse_config(text).with_overrides(output_dir=str(out_dir))


def test_drift(tmp_path: Path) -> None:
    """
    The fitted drift of the free model matches `-dv^2 / (2 c tau)` within the configured tolerance.

    :param tmp_path: Pytest fixture
    """
    record = run(load_config_file("drift_minimal.yaml").with_overrides(output_dir=str(tmp_path)))
    assert record.summary["theoretical_drift"] == pytest.approx(-5.0e-3)
    assert record.summary["drift_within_tolerance"] is True
    assert record.summary["n_records"] == 11
    assert record.outputs == [MOMENTS_FILE]
    lines = (tmp_path / MOMENTS_FILE).read_text(encoding="utf-8").splitlines()
    assert lines[0] == "time,mean_v,variance,total_mass"
    assert len(lines) == 12


def test_summary_file_matches_record(tmp_path: Path) -> None:
    """
    `summary.json` holds the run record, without the output directory.

    :param tmp_path: Pytest fixture
    """
    record = run(load_config_file("drift_minimal.yaml").with_overrides(output_dir=str(tmp_path)))
    written = json.loads((tmp_path / SUMMARY_FILE).read_text(encoding="utf-8"))
    assert written == json.loads(json.dumps(record.to_json()))
    assert written["experiment"] == "drift"
    assert written["seed"] == record.config.seed
    assert "output_dir" not in written["config"]


def test_runs_are_byte_identical(tmp_path: Path) -> None:
    """
    Running the same configuration twice produces identical files.

    :param tmp_path: Pytest fixture
    """
    config = load_config_file("newton_sweep_five.yaml")
    run(config.with_overrides(output_dir=str(tmp_path / "first")))
    run(config.with_overrides(output_dir=str(tmp_path / "second")))
    for name in (NEWTON_SWEEP_FILE, SUMMARY_FILE):
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


def test_newton_sweep(tmp_path: Path) -> None:
    """
    Every grid point sits at half the Newtonian acceleration, with the Newtonian scaling.

    :param tmp_path: Pytest fixture
    """
    record = run(load_config_file("newton_sweep_five.yaml").with_overrides(output_dir=str(tmp_path)))
    assert record.summary["n_rows"] == 15
    assert record.summary["max_ratio_deviation"] < 1e-12
    assert record.summary["mass_exponent"] == pytest.approx(1.0, abs=1e-9)
    assert record.summary["distance_exponent"] == pytest.approx(-2.0, abs=1e-9)
    lines = (tmp_path / NEWTON_SWEEP_FILE).read_text(encoding="utf-8").splitlines()
    assert lines[0] == "mass_kg,r_m,a_measured,a_newton_half,ratio"
    assert len(lines) == 16
    assert all(float(line.split(",")[4]) == pytest.approx(0.5, rel=1e-12) for line in lines[1:])


def test_fp_vs_sde(tmp_path: Path) -> None:
    """
    The sampled ensemble agrees with the Fokker-Planck moments at every checkpoint.

    :param tmp_path: Pytest fixture
    """
    config = parse_config(
        "experiment: fp-vs-sde\n"
        "seed: 20200717\n"
        f"output_dir: {tmp_path}\n"
        "parameters:\n"
        "  dv_rms: 1.0\n"
        "  tau: 1.0\n"
        "  c: 100.0\n"
        "  t_end: 5.0\n"
        "  samples: 20000\n"
        "  sde_dt: 0.01\n"
    )
    record = run(config)
    assert record.summary["n_checkpoints"] == 5
    assert record.summary["max_abs_z_mean"] < 4.0
    assert record.summary["max_abs_z_variance"] < 4.0
    assert record.outputs == [MOMENTS_FILE, MOMENTS_SDE_FILE]
    assert (tmp_path / MOMENTS_SDE_FILE).exists()


def test_fp_vs_sde_shipped(tmp_path: Path) -> None:
    """
    The shipped comparison (1e5 samples, 10 checkpoints, 3 standard errors) passes its family-wise bound.

    :param tmp_path: Pytest fixture
    """
    summary = run(_shipped("fp_vs_sde.yaml", tmp_path)).summary
    assert summary["n_samples"] == 100_000
    assert summary["n_checkpoints"] == 10
    assert summary["n_comparisons"] == 20
    assert summary["z_critical"] == pytest.approx(3.82, abs=0.01)
    assert summary["max_abs_z_mean"] < 3.0
    assert summary["max_abs_z_variance"] < summary["z_critical"]  # type: ignore[operator]
    assert summary["within_z_max"] is True


def test_fp_vs_sde_with_friction(tmp_path: Path) -> None:
    """
    The ensemble also follows the Fokker-Planck moments when friction relaxes it towards `v0 = 0`.

    :param tmp_path: Pytest fixture
    """
    config = parse_config(
        "experiment: fp-vs-sde\n"
        "seed: 20200717\n"
        f"output_dir: {tmp_path}\n"
        "parameters:\n"
        "  dv_rms: 1.0\n"
        "  tau: 1.0\n"
        "  c: 100.0\n"
        "  gamma: 0.1\n"
        "  t_end: 10.0\n"
        "  samples: 20000\n"
        "  sde_dt: 0.01\n"
    )
    summary = run(config).summary
    assert summary["friction"] == {"gamma": 0.1, "v0_mode": "fixed", "v0": 0.0}
    assert summary["max_abs_z_mean"] < summary["z_critical"]  # type: ignore[operator]
    assert summary["max_abs_z_variance"] < summary["z_critical"]  # type: ignore[operator]
    assert summary["within_z_max"] is True


@pytest.mark.parametrize(
    "n_comparisons,expected",
    [
        (0, 3.0),
        (1, 3.0),
        (20, 3.82),
    ],
)
def test_family_wise_z(n_comparisons: int, expected: float) -> None:
    """
    The family-wise bound widens with the number of comparisons and reduces to `z_max` for a single one.

    :param n_comparisons: Size of the family
    :param expected: Expected bound for `z_max = 3`
    """
    assert family_wise_z(3.0, n_comparisons) == pytest.approx(expected, abs=0.01)
    assert family_wise_z(3.0, n_comparisons + 1) >= family_wise_z(3.0, n_comparisons)


def test_measurement_demo(tmp_path: Path) -> None:
    """
    Decohered branches are sampled with their Born probabilities.

    :param tmp_path: Pytest fixture
    """
    record = run(load_config_file("measurement_small.yaml").with_overrides(output_dir=str(tmp_path)))
    summary = record.summary
    probabilities = summary["probabilities"]
    assert probabilities["f1 S"] == 0.0  # type: ignore[index]
    assert probabilities["f1 S1"] == pytest.approx(0.5)  # type: ignore[index]
    assert summary["frequencies"]["f2 S"] == 0.0  # type: ignore[index]
    assert summary["max_abs_z"] < 4.0
    assert 0.0 <= summary["chi_squared_p_value"] <= 1.0  # type: ignore[operator]
    assert len(summary["stages"]) == 4  # type: ignore[arg-type]
    assert summary["collapsed_branch"] in ("f1 S1", "f2 S2")
    assert record.outputs == []


def test_consistency_report_earth(tmp_path: Path) -> None:
    """
    The Earth report carries the chain, the trembling temperature and the photon budget.

    :param tmp_path: Pytest fixture
    """
    summary = run(_shipped("consistency_earth.yaml", tmp_path)).summary
    assert summary["trembling_temperature"] == pytest.approx(0.516, rel=2e-3)
    assert summary["trembling_to_hawking_ratio"] == pytest.approx(8.0 * math.pi)
    assert summary["chain"]["a_measured"] == pytest.approx(-4.91, rel=2e-3)  # type: ignore[index]
    assert summary["chain"]["tau_A"] == pytest.approx(1.479e-11, rel=2e-3)  # type: ignore[index]
    assert summary["photon_budget"]["sufficient"] is True  # type: ignore[index]
    assert summary["nonrelativistic"]["passed"] is True  # type: ignore[index]
    assert summary["separation_check"]["passed"] is True  # type: ignore[index]
    assert summary["recoil_ratio"] is None


def test_consistency_report_water(tmp_path: Path) -> None:
    """
    The water report carries the photon recoil ratio.

    :param tmp_path: Pytest fixture
    """
    summary = run(_shipped("consistency_water.yaml", tmp_path)).summary
    assert summary["recoil_ratio"] == pytest.approx(1.75e-6, rel=0.01)


def test_appendix_d(tmp_path: Path) -> None:
    """
    The split body's center of mass fluctuates like the unsplit body, eight times more than independent halves.

    :param tmp_path: Pytest fixture
    """
    summary = run(_shipped("appendix_d.yaml", tmp_path)).summary
    assert summary["alpha"] == 1.0
    assert abs(summary["z_score"]) < 4.0  # type: ignore[arg-type]
    assert summary["naive_gap"] == pytest.approx(8.0, rel=0.05)


def test_spreading(tmp_path: Path) -> None:
    """
    The packet width grows by `sqrt(2)` over the doubling time `M sigma0^2 / hbar`.

    :param tmp_path: Pytest fixture
    """
    record = run(load_config_file("nondimensional_overrides.yaml").with_overrides(output_dir=str(tmp_path)))
    summary = record.summary
    assert summary["doubling_time"] == pytest.approx(2.0)
    assert summary["t_end"] == pytest.approx(4.0)
    assert summary["width_ratio_at_doubling"] == pytest.approx(math.sqrt(2.0))
    assert summary["spreading_velocity"] == pytest.approx(0.5)
    assert summary["final_width"] == pytest.approx(math.sqrt(5.0))
    assert len((tmp_path / SPREADING_FILE).read_text(encoding="utf-8").splitlines()) == 6


def test_out_of_domain_run_fails(tmp_path: Path) -> None:
    """
    A run whose velocities would leave the model's domain stops with a run error.

    :param tmp_path: Pytest fixture
    """
    with pytest.raises(ExperimentRunError) as e:
        run(load_config_file("drift_out_of_domain.yaml").with_overrides(output_dir=str(tmp_path)))
    assert isinstance(e.value.cause, DomainViolationError)
    assert e.value.experiment == "drift"
    assert not (tmp_path / SUMMARY_FILE).exists()


def _refuse_constant(name: str) -> float:
    raise ValueError(f"Non-standard JSON constant `{name}`")


def test_infinite_c_writes_strict_json(tmp_path: Path) -> None:
    """
    With `c: .inf` the coefficient is constant, the mean does not move and `summary.json` stays strict JSON.

    :param tmp_path: Pytest fixture
    """
    record = run(load_config_file("drift_infinite_c.yaml").with_overrides(output_dir=str(tmp_path)))
    text = (tmp_path / SUMMARY_FILE).read_text(encoding="utf-8")
    written = json.loads(text, parse_constant=_refuse_constant)
    assert "Infinity" not in text
    assert written["config"]["parameters"]["c"] is None
    assert written["summary"]["model"]["c"] is None
    assert written["summary"]["theoretical_drift"] == 0.0
    assert record.summary["drift_within_tolerance"] is True


def test_newton_sweep_shipped(tmp_path: Path) -> None:
    """
    The shipped sweep covers three distances and recovers the inverse-square law.

    :param tmp_path: Pytest fixture
    """
    summary = run(_shipped("newton_sweep.yaml", tmp_path)).summary
    assert summary["distance_exponent"] == pytest.approx(-2.0, abs=1e-9)
    assert summary["max_ratio_deviation"] < 1e-12
    rows = (tmp_path / NEWTON_SWEEP_FILE).read_text(encoding="utf-8").splitlines()[1:]
    assert len({float(row.split(",")[1]) for row in rows}) == 3
