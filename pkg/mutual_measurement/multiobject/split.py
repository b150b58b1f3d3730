"""
:Description: Monte Carlo check of the split-object bookkeeping.

Body A of mass `M` is split into two halves `A1` and `A2` that are measured by the observer and also measure each
other. During every half fluctuation time the observer registers the direct increments `dv_a1`, `dv_a2` and the
cross-measured increments `delta2_v_a1`, `delta1_v_a2`, and updates

    v_a1 -> v_a1 + dv_a1 + dv_a2 + delta2_v_a1
    v_a2 -> v_a2 + dv_a2 + dv_a1 + delta1_v_a2

Momentum conservation between the halves forces `delta2_v_a1 + delta1_v_a2 = 0`, so the cross terms drop out of the
center-of-mass velocity. With direct increments of variance `alpha^2 (M/2)^2` the center of mass then accumulates
`alpha^2 M^2` per fluctuation time, the same as the unsplit body. Treating the halves as independent, directly
measured bodies gives only `alpha^2 M^2 / 8`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Final, Union

import numpy as np

from mutual_measurement.physics.constants import PhysicalConstants, planck_length
from mutual_measurement.physics.exceptions import InvalidParameterError, MomentumConservationError
from mutual_measurement.types import FloatArray, JsonObjectType
from mutual_measurement.utils.random import SampleStreams, StreamPurpose

log: Final = logging.getLogger(__name__)

## Constants ##

# Draws per half interval: direct increment of A1, direct increment of A2, cross-measured increment of A1.
_DRAWS_PER_HALF: Final[int] = 3

Increment = Union[float, FloatArray]


## Types ##


@dataclass(frozen=True)
class SplitScenario:  # pylint: disable=too-many-instance-attributes
    """
    Parameters of a split-object experiment. `alpha` (in (m/s)/kg) scales the velocity fluctuation with mass, and
    `cross_sigma` is the standard deviation of the cross-measured increments.
    """

    total_mass: float
    alpha: float
    n_intervals: int
    samples: int
    seed: int
    cross_sigma: float = 0.0

    def __post_init__(self) -> None:
        """
        :raises InvalidParameterError: If a parameter is out of range.
        """
        if not self.total_mass > 0:
            raise InvalidParameterError(f"Total mass must be positive: {self.total_mass}")
        if not self.alpha >= 0:
            raise InvalidParameterError(f"`alpha` must be non-negative: {self.alpha}")
        if self.n_intervals < 1 or self.samples < 1:
            raise InvalidParameterError("At least one interval and one sample are required")
        if not self.cross_sigma >= 0:
            raise InvalidParameterError(f"`cross_sigma` must be non-negative: {self.cross_sigma}")

    @staticmethod
    def from_separation(  # pylint: disable=too-many-arguments
        total_mass: float,
        separation: float,
        k: PhysicalConstants,
        n_intervals: int,
        samples: int,
        seed: int,
        cross_sigma: float = 0.0,
    ) -> SplitScenario:
        """
        Derives `alpha = l0^2 c^2 / (hbar r)` from the distance to the observer.

        :param total_mass: Mass of the unsplit body.
        :param separation: Distance to the observer.
        :param k: Physical constants.
        :param n_intervals: Number of fluctuation times to simulate.
        :param samples: Number of independent histories.
        :param seed: Master seed.
        :param cross_sigma: (Optional) Standard deviation of the cross-measured increments.
        :raises InvalidParameterError: If the separation is not positive.
        :returns: The scenario.
        """
        if not separation > 0:
            raise InvalidParameterError(f"Separation must be positive: {separation}")
        alpha: Final = planck_length(k) ** 2 * k.c**2 / (k.hbar * separation)
        return SplitScenario(total_mass, alpha, n_intervals, samples, seed, cross_sigma)

    @property
    def predicted_variance(self) -> float:
        """
        :returns: Center-of-mass velocity variance per fluctuation time of the unsplit body, `alpha^2 M^2`.
        """
        return self.alpha**2 * self.total_mass**2

    @property
    def naive_variance(self) -> float:
        """
        :returns: The variance obtained for independently measured halves, `alpha^2 M^2 / 8`.
        """
        return self.predicted_variance / 8.0


@dataclass(frozen=True)
class UpdateRecord:
    """
    Velocity increments registered during one half fluctuation time. Fields may be scalars or equally shaped arrays.
    """

    dv_a1: Increment
    dv_a2: Increment
    delta2_v_a1: Increment
    delta1_v_a2: Increment

    def __post_init__(self) -> None:
        """
        :raises MomentumConservationError: If the cross-measured increments do not cancel exactly.
        """
        total: Final = np.asarray(self.delta2_v_a1) + np.asarray(self.delta1_v_a2)
        if np.any(total != 0):
            worst: Final = int(np.argmax(np.abs(np.atleast_1d(total))))
            raise MomentumConservationError(
                float(np.atleast_1d(self.delta2_v_a1)[worst]), float(np.atleast_1d(self.delta1_v_a2)[worst])
            )


@dataclass(frozen=True)
class ComVarianceResult:
    """
    Outcome of a split-object Monte Carlo experiment. Variances are per fluctuation time.
    """

    measured: float
    predicted: float
    naive_variance: float
    z_score: float
    n_samples: int

    def to_json(self) -> JsonObjectType:
        """
        :returns: The result as a JSON object.
        """
        return {
            "measured": self.measured,
            "predicted": self.predicted,
            "naive_variance": self.naive_variance,
            "naive_predicted": self.predicted / 8.0,
            "z_score": self.z_score,
            "n_samples": self.n_samples,
        }


## Functions ##


def apply_updates(v_a1: Increment, v_a2: Increment, u: UpdateRecord) -> tuple[Increment, Increment]:
    """
    Applies one round of direct and cross-measured updates to the velocities of both halves.

    :param v_a1: Velocity of the first half.
    :param v_a2: Velocity of the second half.
    :param u: Increments. Their momentum-conservation constraint is checked on construction.
    :returns: The updated velocities. Their mean changes by exactly `dv_a1 + dv_a2`.
    """
    direct: Final = u.dv_a1 + u.dv_a2
    return v_a1 + direct + u.delta2_v_a1, v_a2 + direct + u.delta1_v_a2


def _z_score(measured: float, predicted: float, n_increments: int) -> float:
    # Increments have a known zero mean, so their mean square has a standard error of `predicted * sqrt(2 / N)`.
    standard_error: Final = predicted * math.sqrt(2.0 / n_increments)
    if standard_error == 0:
        return 0.0 if measured == predicted else math.inf
    return (measured - predicted) / standard_error


def _direct_increments(
    streams: SampleStreams, s: SplitScenario, interval: int, half: int
) -> tuple[FloatArray, FloatArray, FloatArray]:
    sigma_half: Final = s.alpha * s.total_mass / 2.0
    step: Final = _DRAWS_PER_HALF * (2 * interval + half)
    return (
        sigma_half * streams.standard_normal(step, s.samples),
        sigma_half * streams.standard_normal(step + 1, s.samples),
        s.cross_sigma * streams.standard_normal(step + 2, s.samples),
    )


def com_variance_experiment(s: SplitScenario) -> ComVarianceResult:
    """
    Simulates `s.samples` independent histories of `s.n_intervals` fluctuation times each, with the mutual updates,
    and measures the center-of-mass velocity variance accumulated per fluctuation time.

    :param s: Scenario.
    :returns: The measured and predicted variances and the naive-independence result for the same draws.
    """
    streams: Final = SampleStreams(s.seed, StreamPurpose.SPLIT_OBJECT)
    v_a1 = np.zeros(s.samples)
    v_a2 = np.zeros(s.samples)
    sum_sq = 0.0
    for interval in range(s.n_intervals):
        com_start = 0.5 * (v_a1 + v_a2)
        for half in range(2):
            dv_a1, dv_a2, delta = _direct_increments(streams, s, interval, half)
            v_a1, v_a2 = apply_updates(v_a1, v_a2, UpdateRecord(dv_a1, dv_a2, delta, -delta))
        sum_sq += float(np.sum((0.5 * (v_a1 + v_a2) - com_start) ** 2))

    n_increments: Final = s.samples * s.n_intervals
    measured: Final = sum_sq / n_increments
    result: Final = ComVarianceResult(
        measured=measured,
        predicted=s.predicted_variance,
        naive_variance=naive_com_variance_experiment(s),
        z_score=_z_score(measured, s.predicted_variance, n_increments),
        n_samples=s.samples,
    )
    log.debug("Split-object variance %g (predicted %g, z = %g)", measured, s.predicted_variance, result.z_score)
    return result


def naive_com_variance_experiment(s: SplitScenario) -> float:
    """
    Repeats the experiment while treating the halves as independent bodies that are only measured directly, once per
    fluctuation time, with the same direct increments as the first half interval of `com_variance_experiment`.

    :param s: Scenario.
    :returns: The measured center-of-mass variance per fluctuation time, close to `alpha^2 M^2 / 8`.
    """
    streams: Final = SampleStreams(s.seed, StreamPurpose.SPLIT_OBJECT)
    sum_sq = 0.0
    for interval in range(s.n_intervals):
        dv_a1, dv_a2, _ = _direct_increments(streams, s, interval, 0)
        sum_sq += float(np.sum((0.5 * (dv_a1 + dv_a2)) ** 2))
    return sum_sq / (s.samples * s.n_intervals)
