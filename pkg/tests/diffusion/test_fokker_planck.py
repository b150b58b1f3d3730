"""
:Description: Tests the explicit finite-volume Fokker-Planck step.
"""

from __future__ import annotations

import logging
from typing import Final

import numpy as np
import pytest

from mutual_measurement.diffusion.exceptions import BoundaryContainmentError, NegativeMassError, StabilityError
from mutual_measurement.diffusion.fokker_planck import DIFFUSION_CFL, FRICTION_CFL, fp_step, stable_time_step
from mutual_measurement.diffusion.grid import (
    DistributionState,
    VelocityGrid,
    distribution_moments,
    gaussian_distribution,
)
from mutual_measurement.diffusion.models import (
    DiffusionModel,
    FrictionModel,
    V0Mode,
    diffusion_coefficient,
    theoretical_drift,
)
from mutual_measurement.physics.exceptions import DomainViolationError, InvalidParameterError

UNIT_MODEL: Final = DiffusionModel(dv_rms=1.0, tau=1.0, c=100.0)
GRID: Final = VelocityGrid(v_min=-20.0, v_max=20.0, n_cells=400)


def _run(state: DistributionState, f: FrictionModel | None, n_steps: int) -> DistributionState:
    dt = stable_time_step(GRID, UNIT_MODEL, f)
    for _ in range(n_steps):
        state = fp_step(state, GRID, UNIT_MODEL, f, dt)
    return state


def test_stable_time_step() -> None:
    """
    The bound is set by the largest diffusion coefficient on the grid, and by `gamma` when friction is strong.
    """
    d_max = diffusion_coefficient(UNIT_MODEL, GRID.v_min)
    assert stable_time_step(GRID, UNIT_MODEL) == pytest.approx(DIFFUSION_CFL * GRID.dv_cell**2 / d_max)
    assert stable_time_step(GRID, UNIT_MODEL, FrictionModel(gamma=1000.0)) == pytest.approx(FRICTION_CFL / 1000.0)
    assert stable_time_step(GRID, DiffusionModel(dv_rms=0.0, tau=1.0, c=100.0)) == float("inf")


def test_stable_time_step_outside_domain() -> None:
    """
    Grids that reach `c` are rejected.
    """
    with pytest.raises(DomainViolationError):
        stable_time_step(GRID, DiffusionModel(dv_rms=1.0, tau=1.0, c=20.0))


def test_step_rejects_unstable_time_step() -> None:
    """
    Time steps above the stability bound are refused rather than silently producing garbage.
    """
    state = gaussian_distribution(GRID, 0.0, 1.0)
    with pytest.raises(StabilityError) as e:
        fp_step(state, GRID, UNIT_MODEL, None, 2.0 * stable_time_step(GRID, UNIT_MODEL))
    assert e.value.dt > e.value.bound
    with pytest.raises(InvalidParameterError):
        fp_step(state, GRID, UNIT_MODEL, None, 0.0)


def test_step_rejects_mismatched_grid() -> None:
    """
    The state must live on the grid it is stepped on.
    """
    state = gaussian_distribution(VelocityGrid(v_min=-20.0, v_max=20.0, n_cells=200), 0.0, 1.0)
    with pytest.raises(InvalidParameterError):
        fp_step(state, GRID, UNIT_MODEL, None, 1e-3)


def test_mass_and_drift() -> None:
    """
    Mass is conserved, masses stay non-negative and the mean moves at `dD/dv` per unit time.
    """
    initial = gaussian_distribution(GRID, 0.0, 1.0)
    state = _run(initial, None, 200)
    before = distribution_moments(initial, GRID)
    after = distribution_moments(state, GRID)
    assert float(np.sum(state.p)) == pytest.approx(1.0, abs=1e-12)
    assert float(np.min(state.p)) >= 0.0
    assert state.time == pytest.approx(200 * stable_time_step(GRID, UNIT_MODEL))
    assert after.mean - before.mean == pytest.approx(theoretical_drift(UNIT_MODEL) * state.time, rel=1e-6)


def test_heating() -> None:
    """
    Without friction the variance grows at twice the diffusion coefficient at the mean.
    """
    initial = gaussian_distribution(GRID, 0.0, 1.0)
    state = _run(initial, None, 200)
    growth = distribution_moments(state, GRID).variance - distribution_moments(initial, GRID).variance
    assert growth / state.time == pytest.approx(2.0 * diffusion_coefficient(UNIT_MODEL, 0.0), rel=1e-3)


def test_friction_pulls_mean() -> None:
    """
    A fixed environment velocity pulls the mean towards it; a self-consistent one does not.
    """
    initial = gaussian_distribution(GRID, 2.0, 1.0)
    fixed = distribution_moments(_run(initial, FrictionModel(gamma=0.2), 100), GRID)
    free = distribution_moments(_run(initial, FrictionModel(gamma=0.2, v0_mode=V0Mode.SELF_CONSISTENT), 100), GRID)
    assert fixed.mean < 1.9
    assert free.mean == pytest.approx(2.0 + theoretical_drift(UNIT_MODEL) * free.time, rel=1e-6)


def test_boundary_containment() -> None:
    """
    Mass reaching the outer cells stops the run.
    """
    grid = VelocityGrid(v_min=-1.0, v_max=1.0, n_cells=32)
    state = gaussian_distribution(grid, 0.9, 0.2)
    with pytest.raises(BoundaryContainmentError):
        fp_step(state, grid, UNIT_MODEL, None, stable_time_step(grid, UNIT_MODEL))


def _point_mass(index: int) -> DistributionState:
    p = np.zeros(GRID.n_cells)
    p[index] = 1.0
    return DistributionState(p=p, time=0.0)


def test_negative_mass_is_clipped(caplog: pytest.LogCaptureFixture) -> None:
    """
    Without diffusion, central friction fluxes push a point mass slightly negative downstream. Masses within rounding
    noise are clipped, renormalized and logged.

    :param caplog: Captured log records
    """
    still = DiffusionModel(dv_rms=0.0, tau=1.0, c=100.0)
    # Cell 209 spans [0.9, 1.0], so its upper face lies above `v0 = 0`.
    with caplog.at_level(logging.WARNING, logger="mutual_measurement.diffusion.fokker_planck"):
        state = fp_step(_point_mass(209), GRID, still, FrictionModel(gamma=1.0), 1e-14)
    assert float(np.min(state.p)) >= 0.0
    assert float(np.sum(state.p)) == pytest.approx(1.0, abs=1e-12)
    assert state.p[210] == 0.0
    assert "Clipping negative cell mass" in caplog.text


def test_negative_mass_aborts() -> None:
    """
    Negative masses beyond rounding noise stop the run.
    """
    still = DiffusionModel(dv_rms=0.0, tau=1.0, c=100.0)
    friction = FrictionModel(gamma=1.0)
    with pytest.raises(NegativeMassError):
        fp_step(_point_mass(209), GRID, still, friction, stable_time_step(GRID, still, friction))
