"""
:Description: Discretization of the velocity axis and the grid-based probability distribution evolved by the
    Fokker-Planck solver.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Final, Optional

import numpy as np
from scipy import stats

from mutual_measurement.diffusion.models import (
    DiffusionModel,
    FrictionModel,
    V0Mode,
    diffusion_coefficient,
    stationary_mean,
    theoretical_drift,
)
from mutual_measurement.physics.exceptions import DomainViolationError, InvalidParameterError
from mutual_measurement.types import NORMALIZATION_TOLERANCE, FloatArray, JsonObjectType

log: Final = logging.getLogger(__name__)

## Constants ##

MIN_CELLS: Final[int] = 16
DEFAULT_CELLS: Final[int] = 1024
# Half-width of the default grid, in units of the largest predicted distribution width.
DEFAULT_WIDTH_MULTIPLE: Final[float] = 12.0


## Types ##


@dataclass(frozen=True)
class VelocityGrid:
    """
    Uniform finite-volume grid over `[v_min, v_max]`.
    """

    v_min: float
    v_max: float
    n_cells: int

    def __post_init__(self) -> None:
        """
        :raises InvalidParameterError: If the bounds are not ordered or there are fewer than `MIN_CELLS` cells.
        """
        if not (math.isfinite(self.v_min) and math.isfinite(self.v_max) and self.v_min < self.v_max):
            raise InvalidParameterError(f"Grid bounds must be finite and ordered: [{self.v_min}, {self.v_max}]")
        if self.n_cells < MIN_CELLS:
            raise InvalidParameterError(f"A grid needs at least {MIN_CELLS} cells, got {self.n_cells}")

    @property
    def dv_cell(self) -> float:
        """
        :returns: Width of one cell.
        """
        return (self.v_max - self.v_min) / self.n_cells

    @cached_property
    def faces(self) -> FloatArray:
        """
        :returns: The `n_cells + 1` cell boundaries.
        """
        return np.linspace(self.v_min, self.v_max, self.n_cells + 1)

    @cached_property
    def centers(self) -> FloatArray:
        """
        :returns: The `n_cells` cell midpoints.
        """
        return self.v_min + (np.arange(self.n_cells, dtype=np.float64) + 0.5) * self.dv_cell

    def require_below(self, c: float) -> None:
        """
        Checks that the diffusion coefficient is positive everywhere on the grid.

        :param c: Speed of light.
        :raises DomainViolationError: If `v_max >= c`.
        """
        if self.v_max >= c:
            raise DomainViolationError(f"Grid upper bound {self.v_max} must stay below c={c}")

    def to_json(self) -> JsonObjectType:
        """
        :returns: The grid as a JSON object.
        """
        return {"v_min": self.v_min, "v_max": self.v_max, "n_cells": self.n_cells}


@dataclass(frozen=True)
class DistributionState:
    """
    Per-cell probability masses at a given time.
    """

    p: FloatArray
    time: float

    def __post_init__(self) -> None:
        """
        :raises InvalidParameterError: If a mass is negative or the masses do not sum to 1.
        """
        p = np.array(self.p, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise InvalidParameterError("Cell masses must be a non-empty vector")
        if float(np.min(p)) < 0:
            raise InvalidParameterError(f"Cell masses must be non-negative, found {float(np.min(p))}")
        total: Final = float(np.sum(p))
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise InvalidParameterError(f"Cell masses must sum to 1, got {total!r}")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class MomentRecord:
    """
    First two moments of a velocity distribution at one instant.
    """

    time: float
    mean: float
    variance: float
    total_mass: float

    def __post_init__(self) -> None:
        if self.variance < 0:
            raise InvalidParameterError(f"Variance must be non-negative: {self.variance}")

    def to_json(self) -> JsonObjectType:
        """
        :returns: The record as a JSON object, keyed like the CSV columns.
        """
        return {"time": self.time, "mean_v": self.mean, "variance": self.variance, "total_mass": self.total_mass}


## Functions ##


def gaussian_distribution(grid: VelocityGrid, mean: float, sigma: float, time: float = 0.0) -> DistributionState:
    """
    Discretizes a normal distribution by integrating it over every cell.

    :param grid: Target grid.
    :param mean: Mean velocity.
    :param sigma: Standard deviation. Must be strictly positive.
    :param time: (Optional) Time stamp of the state.
    :raises InvalidParameterError: If `sigma` is not positive or the distribution misses the grid.
    :returns: The normalized distribution.
    """
    if not sigma > 0:
        raise InvalidParameterError(f"Initial width must be strictly positive: {sigma}")
    cdf: Final = stats.norm.cdf(grid.faces, loc=mean, scale=sigma)
    p: Final = np.diff(cdf)
    total: Final = float(np.sum(p))
    if total <= 0:
        raise InvalidParameterError(f"A normal distribution N({mean}, {sigma}^2) has no mass on the grid")
    return DistributionState(p=p / total, time=time)


def distribution_moments(state: DistributionState, grid: VelocityGrid) -> MomentRecord:
    """
    Computes the mean and variance of a distribution, placing each cell's mass at its center.

    :param state: Distribution.
    :param grid: Grid the distribution lives on.
    :returns: The moments.
    """
    total: Final = float(np.sum(state.p))
    mean: Final = float(np.dot(state.p, grid.centers) / total)
    variance: Final = float(np.dot(state.p, (grid.centers - mean) ** 2) / total)
    return MomentRecord(time=state.time, mean=mean, variance=variance, total_mass=total)


def default_grid(
    model: DiffusionModel,
    friction: Optional[FrictionModel],
    mean0: float,
    sigma0: float,
    t_end: float,
    n_cells: int = DEFAULT_CELLS,
) -> VelocityGrid:
    """
    Builds a grid that covers the predicted path of the distribution with `DEFAULT_WIDTH_MULTIPLE` widths of margin on
    both sides. The largest width is predicted from the heating law (free diffusion) or from the stationary width
    (friction).

    :param model: Diffusion model.
    :param friction: Optional friction model.
    :param mean0: Initial mean velocity.
    :param sigma0: Initial width.
    :param t_end: Duration of the run.
    :param n_cells: (Optional) Number of cells.
    :raises DomainViolationError: If the resulting grid reaches `c`.
    :returns: The grid.
    """
    drift: Final = theoretical_drift(model)
    gamma: Final = 0.0 if friction is None else friction.gamma
    if gamma > 0 and friction is not None and friction.v0_mode == V0Mode.FIXED:
        # The mean relaxes monotonically towards its stationary value.
        mean_end = stationary_mean(model, friction) + (mean0 - stationary_mean(model, friction)) * math.exp(
            -gamma * t_end
        )
    else:
        mean_end = mean0 + drift * t_end
    mean_low: Final = min(mean0, mean_end)
    mean_high: Final = max(mean0, mean_end)

    d_max: Final = diffusion_coefficient(model, mean_low)
    if gamma > 0:
        w_max_sq = max(sigma0**2, d_max / gamma)
    else:
        w_max_sq = sigma0**2 + 2.0 * d_max * t_end
    margin: Final = DEFAULT_WIDTH_MULTIPLE * math.sqrt(w_max_sq)

    grid: Final = VelocityGrid(v_min=mean_low - margin, v_max=mean_high + margin, n_cells=n_cells)
    grid.require_below(model.c)
    log.debug("Default grid [%g, %g] with %d cells (w_max = %g)", grid.v_min, grid.v_max, n_cells, math.sqrt(w_max_sq))
    return grid
