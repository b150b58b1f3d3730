"""
:Description: Order-of-magnitude consistency estimates for the measurement mechanism: recoil, photon supply, the
    temperature of the center-of-mass jitter, spatial diffusion and free wave-packet spreading.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Final, Optional

from scipy import special

from mutual_measurement.gravity.bodies import MacroObject
from mutual_measurement.physics.constants import PhysicalConstants, planck_length
from mutual_measurement.physics.exceptions import InvalidParameterError
from mutual_measurement.types import JsonObjectType

log: Final = logging.getLogger(__name__)

## Constants ##

# Root of `x = 3 (1 - exp(-x))`: the peak of the Planck spectrum per unit frequency sits at `hbar omega = x kB T`.
WIEN_FREQUENCY_FACTOR: Final[float] = 3.0 + float(special.lambertw(-3.0 * math.exp(-3.0)).real)


## Types ##


@dataclass(frozen=True)
class PhotonBudget:
    """
    Number of photons the observer receives per fluctuation time, and whether that is at least one.
    """

    n_ph: float

    @property
    def sufficient(self) -> bool:
        """
        :returns: True if at least one photon arrives per fluctuation time.
        """
        return self.n_ph >= 1.0

    def to_json(self) -> JsonObjectType:
        """
        :returns: The budget as a JSON object.
        """
        return {"n_ph": self.n_ph, "sufficient": self.sufficient}


## Functions ##


def _require_positive(name: str, value: float) -> None:
    if not value > 0:
        raise InvalidParameterError(f"`{name}` must be positive: {value}")


def wien_peak_omega(temperature: float, k: PhysicalConstants) -> float:
    """
    :param temperature: Black-body temperature.
    :param k: Physical constants.
    :returns: Angular frequency of the spectral peak, `WIEN_FREQUENCY_FACTOR kB T / hbar`.
    """
    return WIEN_FREQUENCY_FACTOR * k.kB * temperature / k.hbar


def recoil_ratio(source: MacroObject, k: PhysicalConstants, omega: Optional[float] = None) -> float:
    """
    Estimates the momentum of one emitted photon relative to the momentum fluctuation of the emitting body,
    `hbar^2 omega / (rho^2 R^5 l0^2 c^3)`. The recoil is negligible when the ratio is small.

    :param source: Emitting body. Needs `density` and `size`.
    :param k: Physical constants.
    :param omega: (Optional) Photon angular frequency. Defaults to the spectral peak at the body's temperature.
    :raises InvalidParameterError: If a required property is missing.
    :returns: The ratio.
    """
    if source.density is None or source.size is None:
        raise InvalidParameterError("The recoil estimate requires the body's density and size")
    if omega is None:
        if source.temperature is None:
            raise InvalidParameterError("The recoil estimate requires a photon frequency or the body's temperature")
        omega = wien_peak_omega(source.temperature, k)
    return k.hbar**2 * omega / (source.density**2 * source.size**5 * planck_length(k) ** 2 * k.c**3)


def photon_budget(source: MacroObject, solid_angle: float, k: PhysicalConstants) -> PhotonBudget:
    """
    Estimates how many thermal photons an observer covering `solid_angle` receives per fluctuation time of the
    source, `(sigma_SB l0^2 / (kB hbar)) T^3 A M Omega`.

    :param source: Emitting body. Needs `temperature` and `surface_area`.
    :param solid_angle: Solid angle subtended by the observer.
    :param k: Physical constants.
    :raises InvalidParameterError: If a required property is missing or the solid angle is negative.
    :returns: The photon budget. A warning is logged if fewer than one photon arrives.
    """
    if source.temperature is None or source.surface_area is None:
        raise InvalidParameterError("The photon budget requires the body's temperature and surface area")
    if not solid_angle >= 0:
        raise InvalidParameterError(f"Solid angle must be non-negative: {solid_angle}")
    prefactor: Final = k.sigma_SB * planck_length(k) ** 2 / (k.kB * k.hbar)
    budget: Final = PhotonBudget(
        n_ph=prefactor * source.temperature**3 * source.surface_area * source.mass * solid_angle
    )
    if not budget.sufficient:
        log.warning("Fewer than one photon (%g) reaches the observer per fluctuation time", budget.n_ph)
    return budget


def trembling_temperature(mass: float, k: PhysicalConstants) -> float:
    """
    Computes the temperature of the radiation associated with the center-of-mass jitter, `hbar c^3 / (kB G M)`. It
    is `8 pi` times the Hawking temperature of the same mass.

    :param mass: Mass.
    :param k: Physical constants.
    :raises InvalidParameterError: If the mass is not positive.
    :returns: The temperature.
    """
    _require_positive("mass", mass)
    return k.hbar * k.c**3 / (k.kB * k.G * mass)


def spatial_diffusion_coefficient(mass: float, k: PhysicalConstants) -> float:
    """
    :param mass: Mass.
    :param k: Physical constants.
    :raises InvalidParameterError: If the mass is not positive.
    :returns: The position-space diffusion coefficient `hbar / M`.
    """
    _require_positive("mass", mass)
    return k.hbar / mass


def wavepacket_width(sigma0: float, mass: float, t: float, k: PhysicalConstants) -> float:
    """
    Width of a free Gaussian wave packet, `sqrt(sigma0^2 + (v_sp t)^2)` with spreading velocity
    `v_sp = hbar / (M sigma0)`.

    :param sigma0: Initial width.
    :param mass: Mass.
    :param t: Elapsed time.
    :param k: Physical constants.
    :raises InvalidParameterError: If `sigma0` or the mass is not positive, or `t` is negative.
    :returns: The width at time `t`.
    """
    _require_positive("sigma0", sigma0)
    _require_positive("mass", mass)
    if t < 0:
        raise InvalidParameterError(f"Time must be non-negative: {t}")
    v_sp: Final = k.hbar / (mass * sigma0)
    return math.hypot(sigma0, v_sp * t)


def doubling_time(sigma0: float, mass: float, k: PhysicalConstants) -> float:
    """
    :param sigma0: Initial width.
    :param mass: Mass.
    :param k: Physical constants.
    :returns: The time `M sigma0^2 / hbar` after which the wave-packet variance has doubled.
    """
    _require_positive("sigma0", sigma0)
    _require_positive("mass", mass)
    return mass * sigma0**2 / k.hbar
