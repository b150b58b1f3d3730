"""
:Description: Defines the Doppler-modulated diffusion model, the optional friction extension and the closed-form
    rates derived from them.

Velocities follow the sign convention that positive velocities point from the observer towards the source, so a
positive relative velocity means the two bodies separate. The diffusion coefficient is

    D(v) = (1/2) (dv_rms^2 / tau) (1 - v/c)

and, because it is linear in `v`, its derivative `-dv_rms^2 / (2 c tau)` is both the exact sample drift of the Ito
random walk and the emergent acceleration of the mean velocity.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from typing import Final

import numpy as np

from mutual_measurement.diffusion.exceptions import NoStationaryStateError
from mutual_measurement.physics.exceptions import DomainViolationError, InvalidParameterError
from mutual_measurement.types import FloatArray, JsonObjectType

log: Final = logging.getLogger(__name__)

## Constants ##

# `dv_rms / c` must stay below this value for the first-order Doppler treatment to hold.
DEFAULT_MAX_RESOLUTION_RATIO: Final[float] = 0.1

# `w0 / c` must stay below this value for a friction model to be considered valid.
DEFAULT_MAX_WIDTH_RATIO: Final[float] = 0.1


## Types ##


@dataclass(frozen=True)
class DiffusionModel:
    """
    Parameters of the Doppler-modulated diffusion coefficient.

    `dv_rms` is the velocity resolution of one measurement, `tau` the time between measurements and `c` the speed of
    light. `c` may be `math.inf`, in which case the coefficient is constant.
    """

    dv_rms: float
    tau: float
    c: float
    max_resolution_ratio: float = DEFAULT_MAX_RESOLUTION_RATIO

    def __post_init__(self) -> None:
        """
        :raises InvalidParameterError: If a parameter is out of range or `dv_rms` is not small compared to `c`.
        """
        if not self.dv_rms >= 0:
            raise InvalidParameterError(f"`dv_rms` must be non-negative: {self.dv_rms}")
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise InvalidParameterError(f"`tau` must be strictly positive and finite: {self.tau}")
        if not self.c > 0:
            raise InvalidParameterError(f"`c` must be strictly positive: {self.c}")
        if self.dv_rms / self.c >= self.max_resolution_ratio:
            raise InvalidParameterError(
                f"`dv_rms / c` = {self.dv_rms / self.c} must be below {self.max_resolution_ratio}"
            )

    @property
    def rest_coefficient(self) -> float:
        """
        :returns: The diffusion coefficient at zero velocity, `dv_rms^2 / (2 tau)`.
        """
        return 0.5 * self.dv_rms**2 / self.tau

    def to_json(self) -> JsonObjectType:
        """
        :returns: The model parameters as a JSON object. An infinite `c` is rendered as `null`.
        """
        return {
            "dv_rms": self.dv_rms,
            "tau": self.tau,
            "c": self.c if math.isfinite(self.c) else None,
        }


class V0Mode(StrEnum):
    """
    How the environment velocity `v0` of the friction term is chosen.
    """

    FIXED = "fixed"
    SELF_CONSISTENT = "self-consistent"


@dataclass(frozen=True)
class FrictionModel:
    """
    Friction towards an environment velocity `v0`. With `v0_mode` set to `SELF_CONSISTENT`, `v0` follows the current
    mean velocity of the distribution and the `v0` field is ignored.
    """

    gamma: float
    v0_mode: V0Mode = V0Mode.FIXED
    v0: float = 0.0

    def __post_init__(self) -> None:
        """
        :raises InvalidParameterError: If `gamma` is negative.
        """
        if not (self.gamma >= 0 and math.isfinite(self.gamma)):
            raise InvalidParameterError(f"`gamma` must be non-negative and finite: {self.gamma}")

    def environment_velocity(self, current_mean: float) -> float:
        """
        :param current_mean: Current mean velocity of the distribution.
        :returns: The velocity the friction term relaxes towards.
        """
        if self.v0_mode == V0Mode.SELF_CONSISTENT:
            return current_mean
        return self.v0

    def width_is_valid(
        self, model: DiffusionModel, mean_v: float, max_width_ratio: float = DEFAULT_MAX_WIDTH_RATIO
    ) -> bool:
        """
        Checks that the stationary width `w0` stays small compared to `c`. Free diffusion (`gamma == 0`) never
        saturates and is reported as valid; its growth is policed by the solvers instead.

        :param model: Diffusion model the friction is combined with.
        :param mean_v: Mean velocity at which the width is evaluated.
        :param max_width_ratio: (Optional) Largest accepted `w0 / c`.
        :returns: True if `w0 / c < max_width_ratio`.
        """
        if self.gamma == 0 or not math.isfinite(model.c):
            return True
        ratio: Final = math.sqrt(stationary_variance(model, self, mean_v)) / model.c
        if ratio >= max_width_ratio:
            log.warning("Stationary width is %g c, above the validity limit of %g c", ratio, max_width_ratio)
            return False
        return True

    def to_json(self) -> JsonObjectType:
        """
        :returns: The friction parameters as a JSON object.
        """
        return {"gamma": self.gamma, "v0_mode": str(self.v0_mode), "v0": self.v0}


## Functions ##


def diffusion_coefficient(m: DiffusionModel, v: float) -> float:
    """
    Evaluates the Doppler-modulated diffusion coefficient at a single velocity.

    :param m: Diffusion model.
    :param v: Relative velocity.
    :raises DomainViolationError: If `v >= c`, where the coefficient would not be positive.
    :returns: `(1/2) (dv_rms^2 / tau) (1 - v/c)`.
    """
    if v >= m.c:
        raise DomainViolationError(f"Diffusion coefficient is undefined at v={v} >= c={m.c}")
    return m.rest_coefficient * (1.0 - v / m.c)


def diffusion_profile(m: DiffusionModel, v: FloatArray) -> FloatArray:
    """
    Vectorized `diffusion_coefficient`.

    :param m: Diffusion model.
    :param v: Array of velocities.
    :raises DomainViolationError: If any velocity is `>= c`.
    :returns: Array of diffusion coefficients.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.size and float(np.max(v)) >= m.c:
        raise DomainViolationError(f"Diffusion coefficient is undefined at v={float(np.max(v))} >= c={m.c}")
    return m.rest_coefficient * (1.0 - v / m.c)


def doppler_rate(tau_emit: float, v: float, c: float) -> float:
    """
    Computes the photon reception rate seen by an observer moving at relative velocity `v`. The rate drops when the
    bodies separate (`v > 0`).

    :param tau_emit: Emission period in the rest frame of the source.
    :param v: Relative velocity.
    :param c: Speed of light.
    :raises DomainViolationError: If `|v| >= c`.
    :returns: `(1 / tau_emit) (1 - v/c)`.
    """
    if abs(v) >= c:
        raise DomainViolationError(f"Doppler rate is undefined at |v|={abs(v)} >= c={c}")
    return (1.0 - v / c) / tau_emit


def theoretical_drift(m: DiffusionModel) -> float:
    """
    Computes the emergent acceleration of the mean velocity, `-dv_rms^2 / (2 c tau)`. It equals `dD/dv` exactly.

    :param m: Diffusion model.
    :returns: The acceleration. Negative values mean attraction.
    """
    return -(m.dv_rms**2) / (2.0 * m.c * m.tau)


def theoretical_heating_rate(m: DiffusionModel, mean_v: float) -> float:
    """
    Computes the growth rate of the velocity variance, `2 <D>`, to leading order in `v/c`.

    :param m: Diffusion model.
    :param mean_v: Mean velocity.
    :raises DomainViolationError: If `|mean_v| >= c`.
    :returns: `d(w^2)/dt`.
    """
    if abs(mean_v) >= m.c:
        raise DomainViolationError(f"Heating rate is undefined at |v|={abs(mean_v)} >= c={m.c}")
    return 2.0 * diffusion_coefficient(m, mean_v)


def stationary_variance(m: DiffusionModel, f: FrictionModel, mean_v: float) -> float:
    """
    Computes the stationary velocity variance `w0^2 = <D> / gamma` reached under friction.

    :param m: Diffusion model.
    :param f: Friction model.
    :param mean_v: Mean velocity.
    :raises NoStationaryStateError: If `gamma == 0`.
    :returns: The stationary variance.
    """
    if f.gamma == 0:
        raise NoStationaryStateError()
    return diffusion_coefficient(m, mean_v) / f.gamma


def stationary_mean(m: DiffusionModel, f: FrictionModel) -> float:
    """
    Computes the stationary mean velocity `v0 + a / gamma` of a friction model with a fixed environment velocity.

    :param m: Diffusion model.
    :param f: Friction model. Must use `V0Mode.FIXED`.
    :raises NoStationaryStateError: If `gamma == 0` or the environment velocity is self-consistent.
    :returns: The stationary mean velocity.
    """
    if f.gamma == 0:
        raise NoStationaryStateError()
    if f.v0_mode != V0Mode.FIXED:
        raise NoStationaryStateError("A self-consistent environment velocity never reaches a stationary mean.")
    return f.v0 + theoretical_drift(m) / f.gamma


def mutual_drift(m_a: DiffusionModel, m_b: DiffusionModel) -> float:
    """
    Computes the relative acceleration `a_A - a_B` of two bodies that measure each other. Body B sees the relative
    velocity with the opposite sign, so its own acceleration is `+|a_B|` and both contributions add up to attraction.

    :param m_a: Diffusion model of the measurements made on body A.
    :param m_b: Diffusion model of the measurements made on body B.
    :raises InvalidParameterError: If the two models disagree on `c`.
    :returns: `-(|a_A| + |a_B|)`.
    """
    if m_a.c != m_b.c:
        raise InvalidParameterError(f"Both models must share the same c: {m_a.c} != {m_b.c}")
    a_b: Final = -theoretical_drift(m_b)
    return theoretical_drift(m_a) - a_b
