"""
:Description: Monte Carlo representation of the velocity distribution. Each sample follows the Ito random walk

    dv = [D'(v) - gamma (v - v0)] dt + sqrt(2 D(v) dt) xi

whose Fokker-Planck equation is the divergence-form equation solved by `fokker_planck`. Random numbers come from
`SampleStreams`, so every sample's path is fixed by the master seed and its global index.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Final, Optional

import numpy as np

from mutual_measurement.diffusion.exceptions import ValidityExceededError
from mutual_measurement.diffusion.grid import MomentRecord
from mutual_measurement.diffusion.models import DiffusionModel, FrictionModel, diffusion_profile, theoretical_drift
from mutual_measurement.physics.exceptions import InvalidParameterError
from mutual_measurement.types import FloatArray
from mutual_measurement.utils.random import SampleStreams, StreamPurpose

log: Final = logging.getLogger(__name__)

## Constants ##

# Samples may not come closer to `c` than `c * (1 - VALIDITY_MARGIN)`.
VALIDITY_MARGIN: Final[float] = 1e-3


## Types ##


@dataclass(frozen=True)
class EnsembleState:
    """
    A set of sample velocities at a given time. `step` counts the increments applied so far and `first_sample` is
    the global index of the first sample, for ensembles that are one partition of a larger one.
    """

    velocities: FloatArray
    time: float
    seed: int
    step: int = 0
    first_sample: int = 0

    def __post_init__(self) -> None:
        """
        :raises InvalidParameterError: If the ensemble is empty.
        """
        velocities = np.array(self.velocities, dtype=np.float64)
        if velocities.ndim != 1 or velocities.size == 0:
            raise InvalidParameterError("An ensemble needs at least one sample")
        velocities.setflags(write=False)
        object.__setattr__(self, "velocities", velocities)

    @property
    def n_samples(self) -> int:
        """
        :returns: Number of samples.
        """
        return int(self.velocities.size)


@dataclass(frozen=True)
class PartialMoments:
    """
    Mergeable summary of a set of samples: count, mean and sum of squared deviations.
    """

    count: int
    mean: float
    m2: float

    @property
    def variance(self) -> float:
        """
        :returns: The population variance.
        """
        return self.m2 / self.count if self.count else 0.0


## Functions ##


def gaussian_ensemble(
    n_samples: int, mean: float, sigma: float, seed: int, first_sample: int = 0, time: float = 0.0
) -> EnsembleState:
    """
    Draws a normal initial ensemble.

    :param n_samples: Number of samples.
    :param mean: Mean velocity.
    :param sigma: Standard deviation.
    :param seed: Master seed.
    :param first_sample: (Optional) Global index of the first sample.
    :param time: (Optional) Time stamp of the ensemble.
    :raises InvalidParameterError: If `n_samples` is not positive or `sigma` is negative.
    :returns: The ensemble.
    """
    if n_samples < 1:
        raise InvalidParameterError(f"An ensemble needs at least one sample, got {n_samples}")
    if sigma < 0:
        raise InvalidParameterError(f"Initial width must be non-negative: {sigma}")
    streams: Final = SampleStreams(seed, StreamPurpose.INITIAL_CONDITION)
    xi: Final = streams.standard_normal(0, n_samples, first_sample)
    return EnsembleState(velocities=mean + sigma * xi, time=time, seed=seed, first_sample=first_sample)


def _check_validity(velocities: FloatArray, c: float, time: float) -> None:
    if not math.isfinite(c):
        return
    worst: Final = int(np.argmax(np.abs(velocities)))
    if abs(velocities[worst]) >= c * (1.0 - VALIDITY_MARGIN):
        raise ValidityExceededError(float(velocities[worst]), c, time)


def sde_step(
    ens: EnsembleState,
    m: DiffusionModel,
    f: Optional[FrictionModel],
    dt: float,
    streams: Optional[SampleStreams] = None,
    mean_v: Optional[float] = None,
) -> EnsembleState:
    """
    Applies one Euler-Maruyama increment to every sample.

    :param ens: Current ensemble.
    :param m: Diffusion model.
    :param f: Optional friction model.
    :param dt: Time step.
    :param streams: (Optional) Random streams. Defaults to the velocity-increment streams of the ensemble's seed.
    :param mean_v: (Optional) Mean velocity used by a self-consistent friction term. Defaults to the ensemble mean;
        partitions of a larger ensemble should pass the global mean.
    :raises InvalidParameterError: If `dt` is not positive.
    :raises ValidityExceededError: If a sample gets within `VALIDITY_MARGIN` of `c`.
    :returns: The advanced ensemble.
    """
    if not dt > 0:
        raise InvalidParameterError(f"Time step must be strictly positive: {dt}")
    if streams is None:
        streams = SampleStreams(ens.seed, StreamPurpose.VELOCITY_INCREMENT)
    v: Final = ens.velocities
    _check_validity(v, m.c, ens.time)

    drift = np.full_like(v, theoretical_drift(m))
    if f is not None and f.gamma > 0:
        v0 = f.environment_velocity(float(np.mean(v)) if mean_v is None else mean_v)
        drift = drift - f.gamma * (v - v0)
    xi: Final = streams.standard_normal(ens.step, ens.n_samples, ens.first_sample)
    new_v: Final = v + drift * dt + np.sqrt(2.0 * diffusion_profile(m, v) * dt) * xi

    new_time: Final = ens.time + dt
    _check_validity(new_v, m.c, new_time)
    return replace(ens, velocities=new_v, time=new_time, step=ens.step + 1)


def partial_moments(velocities: FloatArray) -> PartialMoments:
    """
    :param velocities: Samples.
    :returns: Their mergeable moment summary.
    """
    v: Final = np.asarray(velocities, dtype=np.float64)
    if v.size == 0:
        return PartialMoments(count=0, mean=0.0, m2=0.0)
    mean: Final = float(np.mean(v))
    return PartialMoments(count=int(v.size), mean=mean, m2=float(np.sum((v - mean) ** 2)))


def merge_moments(a: PartialMoments, b: PartialMoments) -> PartialMoments:
    """
    Combines the summaries of two disjoint sets of samples with the pairwise update of Chan et al.

    :param a: First summary.
    :param b: Second summary.
    :returns: The summary of the union.
    """
    if a.count == 0:
        return b
    if b.count == 0:
        return a
    count: Final = a.count + b.count
    delta: Final = b.mean - a.mean
    mean: Final = a.mean + delta * b.count / count
    m2: Final = a.m2 + b.m2 + delta**2 * a.count * b.count / count
    return PartialMoments(count=count, mean=mean, m2=m2)


def ensemble_moments(ens: EnsembleState) -> MomentRecord:
    """
    :param ens: Ensemble.
    :returns: Its mean and population variance. `total_mass` is always 1.
    """
    moments: Final = partial_moments(ens.velocities)
    return MomentRecord(time=ens.time, mean=moments.mean, variance=moments.variance, total_mass=1.0)


def variance_standard_error(variance: float, n_samples: int) -> float:
    """
    Standard error of a sample variance, in the Gaussian approximation.

    :param variance: Variance estimate.
    :param n_samples: Number of samples. Must be at least 2.
    :returns: `variance * sqrt(2 / (n_samples - 1))`.
    """
    if n_samples < 2:
        raise InvalidParameterError(f"At least two samples are required, got {n_samples}")
    return variance * math.sqrt(2.0 / (n_samples - 1))
