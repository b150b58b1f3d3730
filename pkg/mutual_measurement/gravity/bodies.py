"""
:Description: Describes the macroscopic bodies that measure each other.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from enum import StrEnum
from typing import Final, Optional

from mutual_measurement.physics.exceptions import InvalidParameterError
from mutual_measurement.types import JsonObjectType

## Constants ##

# Reference bodies used by the shipped experiments.
EARTH_MASS: Final[float] = 5.972e24
EARTH_RADIUS: Final[float] = 6.371e6
EARTH_SURFACE_AREA: Final[float] = 5.1e14
EARTH_TEMPERATURE: Final[float] = 288.0
MOON_MASS: Final[float] = 7.342e22
EARTH_MOON_DISTANCE: Final[float] = 3.844e8


## Types ##


class Which(StrEnum):
    """
    Selects one body of a `BodyPair`.
    """

    A = "A"
    B = "B"


@dataclass(frozen=True)
class MacroObject:
    """
    A macroscopic body. Only the mass is required; the other properties are needed by some consistency estimates.

    Units: `mass` kg, `density` kg/m^3, `size` m, `temperature` K, `surface_area` m^2.
    """

    mass: float
    density: Optional[float] = None
    size: Optional[float] = None
    temperature: Optional[float] = None
    surface_area: Optional[float] = None

    def __post_init__(self) -> None:
        """
        :raises InvalidParameterError: If the mass or an optional property is not positive. A temperature of zero is
            accepted.
        """
        if not self.mass > 0:
            raise InvalidParameterError(f"Mass must be positive: {self.mass}")
        for name in ("density", "size", "surface_area"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise InvalidParameterError(f"`{name}` must be positive when present: {value}")
        if self.temperature is not None and not self.temperature >= 0:
            raise InvalidParameterError(f"`temperature` must be non-negative when present: {self.temperature}")

    def to_json(self) -> JsonObjectType:
        """
        :returns: The properties that are set, as a JSON object.
        """
        return {f.name: getattr(self, f.name) for f in fields(self) if getattr(self, f.name) is not None}


@dataclass(frozen=True)
class BodyPair:
    """
    Two bodies `a` and `b` at distance `separation` (m).
    """

    a: MacroObject
    b: MacroObject
    separation: float

    def __post_init__(self) -> None:
        """
        :raises InvalidParameterError: If the separation is not positive.
        """
        if not self.separation > 0:
            raise InvalidParameterError(f"Separation must be positive: {self.separation}")

    def body(self, which: Which) -> MacroObject:
        """
        :param which: Selected body.
        :returns: The body.
        """
        return self.a if which == Which.A else self.b

    @property
    def total_mass(self) -> float:
        """
        :returns: `M_A + M_B`.
        """
        return self.a.mass + self.b.mass
