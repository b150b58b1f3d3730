"""
:Description: Houses physical constants, the nondimensionalization convention and the Planck-scale derived quantities
    used by every other module.

Units are documented conventions, not checked dimensions. In SI mode every quantity is in SI units. In nondimensional
mode the speed of light is set to a finite, desk-scale value (100 by default) so that `v/c` corrections can be
resolved by a simulation.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, fields, replace
from enum import StrEnum
from typing import Final

import scipy.constants

from mutual_measurement.physics.exceptions import InvalidParameterError
from mutual_measurement.types import JsonObjectType

log: Final = logging.getLogger(__name__)

## Constants ##

# Default speed of light in nondimensional (simulation) units.
DEFAULT_NONDIMENSIONAL_C: Final[float] = 100.0

# `hbar / (M l0 c)` must stay below this value for the non-relativistic treatment to be trusted.
DEFAULT_NONRELATIVISTIC_THRESHOLD: Final[float] = 1e-2


## Types ##


@dataclass(frozen=True)
class PhysicalConstants:
    """
    Immutable set of the physical constants used by the model.

    Fields: `c` (m/s), `hbar` (J s), `G` (m^3 / (kg s^2)), `kB` (J/K), `sigma_SB` (W / (m^2 K^4)).
    """

    c: float
    hbar: float
    G: float  # pylint: disable=invalid-name
    kB: float  # pylint: disable=invalid-name
    sigma_SB: float  # pylint: disable=invalid-name

    def __post_init__(self) -> None:
        """
        Validates that every constant is strictly positive.

        :raises InvalidParameterError: If a constant is not strictly positive.
        """
        for field in fields(self):
            value = getattr(self, field.name)
            if not value > 0:
                raise InvalidParameterError(f"Physical constant `{field.name}` must be strictly positive: {value}")

    def with_overrides(self, **overrides: float) -> PhysicalConstants:
        """
        Returns a copy with some constants replaced.

        :param overrides: Constant names and their new values.
        :raises InvalidParameterError: If an unknown constant is named or a value is not strictly positive.
        :returns: A new `PhysicalConstants` instance.
        """
        known: Final = {f.name for f in fields(self)}
        unknown: Final = sorted(set(overrides) - known)
        if unknown:
            raise InvalidParameterError(f"Unknown physical constant(s): {', '.join(unknown)}")
        return replace(self, **overrides)

    def to_json(self) -> JsonObjectType:
        """
        :returns: The constants as a JSON object.
        """
        return {f.name: getattr(self, f.name) for f in fields(self)}


# CODATA recommended values, as shipped by `scipy.constants`.
CODATA: Final[PhysicalConstants] = PhysicalConstants(
    c=scipy.constants.c,
    hbar=scipy.constants.hbar,
    G=scipy.constants.G,
    kB=scipy.constants.k,
    sigma_SB=scipy.constants.Stefan_Boltzmann,
)

# Default constants of nondimensional runs.
NONDIMENSIONAL: Final[PhysicalConstants] = PhysicalConstants(
    c=DEFAULT_NONDIMENSIONAL_C, hbar=1.0, G=1.0, kB=1.0, sigma_SB=1.0
)


class UnitMode(StrEnum):
    """
    Unit conventions a run can be performed in.
    """

    SI = "si"
    NONDIMENSIONAL = "nondimensional"


@dataclass(frozen=True)
class UnitSystem:
    """
    Describes the unit convention of a run and how simulation units map back onto SI units.

    In SI mode both scales are 1. In nondimensional mode `velocity_scale` is the SI value (m/s) of one simulation
    velocity unit and `time_scale` the SI value (s) of one simulation time unit.
    """

    mode: UnitMode
    constants: PhysicalConstants
    velocity_scale: float = 1.0
    time_scale: float = 1.0

    def __post_init__(self) -> None:
        if not (self.velocity_scale > 0 and self.time_scale > 0):
            raise InvalidParameterError("Unit scales must be strictly positive.")

    @staticmethod
    def si() -> UnitSystem:
        """
        :returns: The SI unit system, with CODATA constants.
        """
        return UnitSystem(mode=UnitMode.SI, constants=CODATA)

    @staticmethod
    def nondimensional(constants: PhysicalConstants = NONDIMENSIONAL, time_scale: float = 1.0) -> UnitSystem:
        """
        Builds a nondimensional unit system. The velocity scale is fixed by identifying the simulation speed of light
        with the physical one.

        :param constants: (Optional) Constants in simulation units. Defaults to `NONDIMENSIONAL`.
        :param time_scale: (Optional) SI duration of one simulation time unit.
        :returns: The unit system.
        """
        return UnitSystem(
            mode=UnitMode.NONDIMENSIONAL,
            constants=constants,
            velocity_scale=CODATA.c / constants.c,
            time_scale=time_scale,
        )

    @property
    def c(self) -> float:
        """
        :returns: Speed of light in this unit system.
        """
        return self.constants.c

    def to_si_velocity(self, v: float) -> float:
        """
        :param v: Velocity in this unit system.
        :returns: The same velocity in m/s.
        """
        return v * self.velocity_scale

    def to_si_time(self, t: float) -> float:
        """
        :param t: Duration in this unit system.
        :returns: The same duration in s.
        """
        return t * self.time_scale


@dataclass(frozen=True)
class NonrelativisticReport:
    """
    Result of checking `v ~ hbar / (M l0) << c` for a given mass.
    """

    mass: float
    ratio: float
    threshold: float
    passed: bool

    def to_json(self) -> JsonObjectType:
        """
        :returns: The report as a JSON object.
        """
        return {"mass": self.mass, "ratio": self.ratio, "threshold": self.threshold, "passed": self.passed}


## Functions ##


def planck_length(k: PhysicalConstants) -> float:
    """
    Computes the Planck length `sqrt(G hbar / c^3)`, the characteristic length scale of the velocity fluctuations.

    :param k: Physical constants.
    :returns: The Planck length.
    """
    return math.sqrt(k.G * k.hbar / k.c**3)


def planck_mass(k: PhysicalConstants) -> float:
    """
    Computes the Planck mass `sqrt(hbar c / G)`.

    :param k: Physical constants.
    :returns: The Planck mass.
    """
    return math.sqrt(k.hbar * k.c / k.G)


def check_nonrelativistic(
    mass: float, k: PhysicalConstants, threshold: float = DEFAULT_NONRELATIVISTIC_THRESHOLD
) -> NonrelativisticReport:
    """
    Checks that the fluctuation velocity `hbar / (M l0)` of a body is much smaller than `c`.

    :param mass: Body mass. Must be positive.
    :param k: Physical constants.
    :param threshold: (Optional) Largest accepted value of `hbar / (M l0 c)`.
    :raises InvalidParameterError: If the mass is not positive.
    :returns: A report holding the ratio and a pass flag.
    """
    if not mass > 0:
        raise InvalidParameterError(f"Mass must be positive: {mass}")
    ratio: Final[float] = k.hbar / (mass * planck_length(k) * k.c)
    passed: Final[bool] = ratio < threshold
    if not passed:
        log.warning("Mass %g is too light for the non-relativistic treatment (ratio %g)", mass, ratio)
    return NonrelativisticReport(mass=mass, ratio=ratio, threshold=threshold, passed=passed)


def hawking_temperature(mass: float, k: PhysicalConstants) -> float:
    """
    Computes the Hawking temperature `hbar c^3 / (8 pi G M kB)` of a black hole of the given mass.

    :param mass: Mass. Must be positive.
    :param k: Physical constants.
    :raises InvalidParameterError: If the mass is not positive.
    :returns: The temperature.
    """
    if not mass > 0:
        raise InvalidParameterError(f"Mass must be positive: {mass}")
    return k.hbar * k.c**3 / (8.0 * math.pi * k.G * mass * k.kB)
