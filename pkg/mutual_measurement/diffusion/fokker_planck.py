"""
:Description: Explicit finite-volume solver for

    dP/dt = d/dv ( gamma (v - v0) P + D(v) dP/dv )

Fluxes are evaluated at cell faces (central average for the friction term, `D` at the face for the diffusion term)
and the outer faces carry no flux, so the total mass is conserved by construction. The update is assembled as a
three-point stencil whose weights are all non-negative below the stability bound.
"""

from __future__ import annotations

import logging
import math
from typing import Final, Optional

import numpy as np

from mutual_measurement.diffusion.exceptions import BoundaryContainmentError, NegativeMassError, StabilityError
from mutual_measurement.diffusion.grid import DistributionState, VelocityGrid
from mutual_measurement.diffusion.models import DiffusionModel, FrictionModel, diffusion_profile
from mutual_measurement.physics.exceptions import InvalidParameterError

log: Final = logging.getLogger(__name__)

## Constants ##

# Diffusive stability factor: `dt <= DIFFUSION_CFL * dv_cell^2 / max(D)`.
DIFFUSION_CFL: Final[float] = 0.4
# Friction stability factor: `dt <= FRICTION_CFL / gamma`.
FRICTION_CFL: Final[float] = 0.1
# Negative masses down to this value are treated as rounding noise.
NEGATIVE_MASS_TOLERANCE: Final[float] = 1e-12
# Largest probability tolerated in the outermost cells on either side of the grid.
BOUNDARY_MASS_LIMIT: Final[float] = 1e-8
BOUNDARY_CELLS: Final[int] = 2


## Functions ##


def stable_time_step(grid: VelocityGrid, m: DiffusionModel, f: Optional[FrictionModel] = None) -> float:
    """
    Computes the largest time step accepted by `fp_step`.

    :param grid: Velocity grid.
    :param m: Diffusion model.
    :param f: (Optional) Friction model.
    :returns: The bound. `math.inf` when nothing evolves.
    """
    grid.require_below(m.c)
    # D decreases with v, so its maximum sits on the lower edge.
    d_max: Final = float(np.max(diffusion_profile(m, grid.faces[:1])))
    bound = math.inf if d_max == 0 else DIFFUSION_CFL * grid.dv_cell**2 / d_max
    if f is not None and f.gamma > 0:
        bound = min(bound, FRICTION_CFL / f.gamma)
    return bound


def _edge_mass(p: np.ndarray) -> float:
    return float(max(np.sum(p[:BOUNDARY_CELLS]), np.sum(p[-BOUNDARY_CELLS:])))


def fp_step(
    state: DistributionState,
    grid: VelocityGrid,
    m: DiffusionModel,
    f: Optional[FrictionModel],
    dt: float,
) -> DistributionState:
    """
    Advances a distribution by one explicit step.

    :param state: Current distribution.
    :param grid: Grid the distribution lives on.
    :param m: Diffusion model.
    :param f: Optional friction model. A self-consistent environment velocity is taken from the current mean.
    :param dt: Time step.
    :raises InvalidParameterError: If `dt` is not positive or the grid and state do not match.
    :raises StabilityError: If `dt` exceeds `stable_time_step`.
    :raises NegativeMassError: If a cell mass drops below `-NEGATIVE_MASS_TOLERANCE`.
    :raises BoundaryContainmentError: If more than `BOUNDARY_MASS_LIMIT` reaches the grid edges.
    :returns: The distribution at `state.time + dt`.
    """
    if not dt > 0:
        raise InvalidParameterError(f"Time step must be strictly positive: {dt}")
    if state.p.size != grid.n_cells:
        raise InvalidParameterError(f"State has {state.p.size} cells, grid has {grid.n_cells}")
    bound: Final = stable_time_step(grid, m, f)
    if dt > bound * (1.0 + 1e-12):
        raise StabilityError(dt, bound)

    p: Final = state.p
    dv: Final = grid.dv_cell
    interior: Final = grid.faces[1:-1]
    d_face: Final = diffusion_profile(m, interior)

    if f is not None and f.gamma > 0:
        v0 = f.environment_velocity(float(np.dot(p, grid.centers)))
        advection = f.gamma * (interior - v0) / (2.0 * dv)
    else:
        advection = np.zeros_like(interior)

    # Flux through interior face k (between cells k and k+1) is `lower[k] * p[k] + upper[k] * p[k+1]`.
    # Padding with zeros closes the outer faces.
    lower: Final = np.pad(advection - d_face / dv**2, 1)
    upper: Final = np.pad(advection + d_face / dv**2, 1)
    p_prev: Final = np.concatenate(([0.0], p[:-1]))
    p_next: Final = np.concatenate((p[1:], [0.0]))
    new_p = p * (1.0 + dt * (lower[1:] - upper[:-1])) + dt * upper[1:] * p_next - dt * lower[:-1] * p_prev

    new_time: Final = state.time + dt
    min_mass: Final = float(np.min(new_p))
    if min_mass < -NEGATIVE_MASS_TOLERANCE:
        raise NegativeMassError(min_mass, new_time)
    if min_mass < 0:
        log.warning("Clipping negative cell mass %g at t=%g", min_mass, new_time)
        new_p = np.clip(new_p, 0.0, None)
        new_p /= np.sum(new_p)

    edge_mass: Final = _edge_mass(new_p)
    if edge_mass > BOUNDARY_MASS_LIMIT:
        raise BoundaryContainmentError(edge_mass, BOUNDARY_MASS_LIMIT, new_time)
    return DistributionState(p=new_p, time=new_time)
