"""
:Description: Tests the velocity grid, the discretized distribution and the default grid rule.
"""

from __future__ import annotations

import math
from typing import Final

import numpy as np
import pytest

from mutual_measurement.diffusion.grid import (
    DEFAULT_WIDTH_MULTIPLE,
    DistributionState,
    VelocityGrid,
    default_grid,
    distribution_moments,
    gaussian_distribution,
)
from mutual_measurement.diffusion.models import DiffusionModel, FrictionModel
from mutual_measurement.physics.exceptions import DomainViolationError, InvalidParameterError

UNIT_MODEL: Final = DiffusionModel(dv_rms=1.0, tau=1.0, c=100.0)


def test_grid_geometry() -> None:
    """
    Faces bound the cells and centers sit halfway between them.
    """
    grid = VelocityGrid(v_min=-1.0, v_max=1.0, n_cells=16)
    assert grid.dv_cell == 0.125
    assert grid.faces.size == 17
    assert grid.faces[0] == -1.0
    assert grid.faces[-1] == 1.0
    np.testing.assert_allclose(grid.centers, 0.5 * (grid.faces[1:] + grid.faces[:-1]), atol=1e-15)


@pytest.mark.parametrize(
    "v_min,v_max,n_cells",
    [
        (1.0, -1.0, 32),
        (0.0, 0.0, 32),
        (-math.inf, 1.0, 32),
        (-1.0, 1.0, 8),
    ],
)
def test_invalid_grids(v_min: float, v_max: float, n_cells: int) -> None:
    """
    Grids need ordered finite bounds and enough cells.

    :param v_min: Lower bound
    :param v_max: Upper bound
    :param n_cells: Number of cells
    """
    with pytest.raises(InvalidParameterError):
        VelocityGrid(v_min=v_min, v_max=v_max, n_cells=n_cells)


def test_require_below() -> None:
    """
    A grid reaching `c` is outside the domain of the diffusion coefficient.
    """
    grid = VelocityGrid(v_min=-200.0, v_max=100.0, n_cells=64)
    with pytest.raises(DomainViolationError):
        grid.require_below(100.0)
    grid.require_below(100.5)


def test_gaussian_distribution_moments() -> None:
    """
    A well resolved Gaussian keeps its mean, and its variance up to the `dv^2 / 12` cell-averaging term.
    """
    grid = VelocityGrid(v_min=-10.0, v_max=10.0, n_cells=1000)
    state = gaussian_distribution(grid, 0.5, 1.0)
    moments = distribution_moments(state, grid)
    assert moments.total_mass == pytest.approx(1.0, abs=1e-12)
    assert moments.mean == pytest.approx(0.5, abs=1e-9)
    assert moments.variance == pytest.approx(1.0 + grid.dv_cell**2 / 12.0, rel=1e-6)
    assert moments.time == 0.0


def test_gaussian_distribution_off_grid() -> None:
    """
    A Gaussian that misses the grid cannot be normalized.
    """
    grid = VelocityGrid(v_min=-1.0, v_max=1.0, n_cells=16)
    with pytest.raises(InvalidParameterError):
        gaussian_distribution(grid, 1000.0, 1.0)
    with pytest.raises(InvalidParameterError):
        gaussian_distribution(grid, 0.0, 0.0)


@pytest.mark.parametrize(
    "p",
    [
        [0.5, 0.6],
        [1.5, -0.5],
        [],
    ],
)
def test_invalid_distributions(p: list[float]) -> None:
    """
    Masses must be non-negative and sum to one.

    :param p: Invalid masses
    """
    with pytest.raises(InvalidParameterError):
        DistributionState(p=np.array(p), time=0.0)


def test_default_grid_free_diffusion() -> None:
    """
    The default grid covers the drifting mean with twelve predicted widths on both sides and stays below `c`.
    """
    grid = default_grid(UNIT_MODEL, None, 0.0, 0.5, 10.0)
    w_max = math.sqrt(0.25 + 2.0 * 0.5 * (1.0 + 0.05 / 100.0) * 10.0)
    assert grid.n_cells == 1024
    assert grid.v_max == pytest.approx(DEFAULT_WIDTH_MULTIPLE * w_max, rel=1e-12)
    assert grid.v_min == pytest.approx(-0.05 - DEFAULT_WIDTH_MULTIPLE * w_max, rel=1e-12)
    assert grid.v_max < UNIT_MODEL.c


def test_default_grid_friction() -> None:
    """
    Under friction the largest width is the stationary one.
    """
    grid = default_grid(UNIT_MODEL, FrictionModel(gamma=0.1), 0.0, 0.5, 100.0, n_cells=512)
    w0 = math.sqrt(0.5 * (1.0 + 0.05 / 100.0) / 0.1)
    assert grid.n_cells == 512
    assert grid.v_max == pytest.approx(DEFAULT_WIDTH_MULTIPLE * w0, rel=1e-3)


def test_default_grid_reaching_c() -> None:
    """
    Runs whose predicted width reaches `c` are rejected before they start.
    """
    model = DiffusionModel(dv_rms=1.0, tau=1.0, c=11.0)
    with pytest.raises(DomainViolationError):
        default_grid(model, None, 0.0, 0.5, 100.0)


def test_moment_record_to_json() -> None:
    """
    Moment records are keyed like the CSV columns.
    """
    grid = VelocityGrid(v_min=-10.0, v_max=10.0, n_cells=100)
    record = distribution_moments(gaussian_distribution(grid, 0.0, 1.0, time=2.0), grid)
    assert set(record.to_json()) == {"time", "mean_v", "variance", "total_mass"}
    assert record.to_json()["time"] == 2.0
