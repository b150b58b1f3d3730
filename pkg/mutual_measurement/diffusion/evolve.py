"""
:Description: Experiment driver that repeatedly steps a distribution or an ensemble and records its moments at a
    fixed cadence.
"""

from __future__ import annotations

import logging
import math
from dataclasses import replace
from typing import Final, Optional, Union

from mutual_measurement.diffusion.ensemble import EnsembleState, ensemble_moments, sde_step
from mutual_measurement.diffusion.fokker_planck import fp_step, stable_time_step
from mutual_measurement.diffusion.grid import DistributionState, MomentRecord, VelocityGrid, distribution_moments
from mutual_measurement.diffusion.models import DiffusionModel, FrictionModel
from mutual_measurement.physics.exceptions import InvalidParameterError
from mutual_measurement.utils.random import SampleStreams, StreamPurpose

log: Final = logging.getLogger(__name__)

# Default number of SDE steps per recording interval.
DEFAULT_SDE_STEPS_PER_RECORD: Final[int] = 10
# Relative slack allowed when checking that `t_end` is a whole number of recording intervals.
_INTERVAL_TOLERANCE: Final[float] = 1e-9

State = Union[DistributionState, EnsembleState]


def _steps_per_record(record_every: float, dt: float) -> int:
    return max(1, math.ceil(record_every / dt))


def _sde_dt(record_every: float, friction: Optional[FrictionModel]) -> float:
    dt = record_every / DEFAULT_SDE_STEPS_PER_RECORD
    if friction is not None and friction.gamma > 0:
        dt = min(dt, 0.1 / friction.gamma)
    return dt


def evolve(  # pylint: disable=too-many-arguments,too-many-locals
    initial: State,
    model: DiffusionModel,
    t_end: float,
    record_every: float,
    *,
    grid: Optional[VelocityGrid] = None,
    friction: Optional[FrictionModel] = None,
    dt: Optional[float] = None,
) -> list[MomentRecord]:
    """
    Evolves a distribution (Fokker-Planck solver) or an ensemble (SDE) and records the moments every `record_every`.

    The time step is shrunk so that a whole number of steps fits in one recording interval. Without an explicit `dt`
    the solver uses its stability bound and the ensemble uses a tenth of the recording interval (at most `0.1 /
    gamma`). In self-consistent friction mode the environment velocity is set to the current mean at every step.

    :param initial: Initial distribution or ensemble.
    :param model: Diffusion model.
    :param t_end: Duration. Must be a whole multiple of `record_every`. Zero returns only the initial moments.
    :param record_every: Recording interval.
    :param grid: Velocity grid. Required for a distribution.
    :param friction: (Optional) Friction model.
    :param dt: (Optional) Largest time step to use.
    :raises InvalidParameterError: If the durations are inconsistent or a distribution is given without a grid.
    :returns: Moment records at `initial.time + k * record_every`, for `k = 0 .. t_end / record_every`.
    """
    if t_end < 0:
        raise InvalidParameterError(f"`t_end` must be non-negative: {t_end}")
    is_distribution: Final = isinstance(initial, DistributionState)
    if is_distribution and grid is None:
        raise InvalidParameterError("Evolving a distribution requires its velocity grid")

    def _moments(state: State) -> MomentRecord:
        if isinstance(state, DistributionState):
            assert grid is not None
            return distribution_moments(state, grid)
        return ensemble_moments(state)

    records: list[MomentRecord] = [_moments(initial)]
    if t_end == 0:
        return records

    if not record_every > 0:
        raise InvalidParameterError(f"`record_every` must be strictly positive: {record_every}")
    n_records: Final = round(t_end / record_every)
    if n_records < 1 or abs(n_records * record_every - t_end) > _INTERVAL_TOLERANCE * t_end:
        raise InvalidParameterError(f"`t_end` ({t_end}) must be a whole multiple of `record_every` ({record_every})")

    if is_distribution:
        assert grid is not None
        max_dt = stable_time_step(grid, model, friction) if dt is None else dt
    else:
        max_dt = _sde_dt(record_every, friction) if dt is None else dt
    if not max_dt > 0:
        raise InvalidParameterError(f"Time step must be strictly positive: {max_dt}")
    n_steps: Final = _steps_per_record(record_every, max_dt) if math.isfinite(max_dt) else 1
    step_dt: Final = record_every / n_steps
    log.debug("Evolving to t=%g with dt=%g (%d steps per record, %d records)", t_end, step_dt, n_steps, n_records)

    streams: Final = (
        None
        if isinstance(initial, DistributionState)
        else SampleStreams(initial.seed, StreamPurpose.VELOCITY_INCREMENT)
    )
    state: State = initial
    for k in range(1, n_records + 1):
        for _ in range(n_steps):
            if isinstance(state, DistributionState):
                assert grid is not None
                state = fp_step(state, grid, model, friction, step_dt)
            else:
                state = sde_step(state, model, friction, step_dt, streams)
        # Record times are exact multiples of `record_every`.
        state = replace(state, time=initial.time + k * record_every)
        records.append(_moments(state))
    return records
