"""
:Description: The Planck-scale parameter chain that turns a body's mass into the emergent acceleration it causes.

    tau = M l0^2 / hbar            (fluctuation time)
    dv  = tau c^2 / r              (velocity resolution at distance r)
    a   = -dv^2 / (2 c tau)        (drift of the mean velocity)

Every formula is taken with a unit prefactor. Substituting `l0^2 c^3 / hbar = G` gives `a = -G M / (2 r^2)` exactly,
so the chain reproduces Newton's law up to the factor 1/2 that the unit-prefactor convention leaves behind.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Final

from mutual_measurement.diffusion.models import DiffusionModel
from mutual_measurement.gravity.bodies import BodyPair, MacroObject, Which
from mutual_measurement.physics.constants import PhysicalConstants, planck_length
from mutual_measurement.physics.exceptions import InvalidParameterError
from mutual_measurement.types import JsonObjectType

log: Final = logging.getLogger(__name__)

## Constants ##

PREFACTOR_NOTE: Final[str] = (
    "All chain formulas use unit numerical prefactors, which the underlying scaling argument does not determine."
    " Under this convention the measured acceleration is exactly -G M / (2 r^2); only scalings and orders of"
    " magnitude are meaningful."
)

# `r / (c tau)` must exceed this value for the photon-train argument to hold.
DEFAULT_SEPARATION_RATIO: Final[float] = 10.0


## Types ##


@dataclass(frozen=True)
class ChainReport:
    """
    Intermediate and final values of the parameter chain for one body of a pair.

    `lyapunov_exponent` is the `1 / tau` scaling of the chaotic divergence rate attributed to the center-of-mass
    motion. `friction_estimate` is the `1 / tau` order of magnitude of the friction coefficient `gamma` that the
    measuring environment exerts on the body. Both are informational; neither enters the chain.
    """

    l0: float
    tau_a: float
    dv_a: float
    a_measured: float
    lyapunov_exponent: float
    friction_estimate: float
    prefactor_note: str = PREFACTOR_NOTE

    def __post_init__(self) -> None:
        if not self.a_measured < 0:
            raise InvalidParameterError(f"The measured acceleration must be attractive: {self.a_measured}")

    def to_json(self) -> JsonObjectType:
        """
        :returns: The report as a JSON object.
        """
        return {
            "l0": self.l0,
            "tau_A": self.tau_a,
            "dv_A": self.dv_a,
            "a_measured": self.a_measured,
            "lyapunov_exponent": self.lyapunov_exponent,
            "friction_estimate": self.friction_estimate,
            "prefactor_note": self.prefactor_note,
        }


@dataclass(frozen=True)
class SeparationReport:
    """
    Result of checking `r >> c tau` for both bodies of a pair.
    """

    ratio_a: float
    ratio_b: float
    threshold: float

    @property
    def passed(self) -> bool:
        """
        :returns: True if both ratios exceed the threshold.
        """
        return min(self.ratio_a, self.ratio_b) > self.threshold

    def to_json(self) -> JsonObjectType:
        """
        :returns: The report as a JSON object.
        """
        return {"ratio_a": self.ratio_a, "ratio_b": self.ratio_b, "threshold": self.threshold, "passed": self.passed}


## Functions ##


def fluctuation_time(mass: float, l0: float, k: PhysicalConstants) -> float:
    """
    Computes the characteristic time of velocity fluctuations, `M l0^2 / hbar`. It is the time after which a wave
    packet of width `l0` doubles its variance.

    :param mass: Mass.
    :param l0: Fluctuation length, normally `planck_length(k)`.
    :param k: Physical constants.
    :raises InvalidParameterError: If the mass is not positive.
    :returns: The fluctuation time.
    """
    if not mass > 0:
        raise InvalidParameterError(f"Mass must be positive: {mass}")
    return mass * l0**2 / k.hbar


def _tau(mass: float, k: PhysicalConstants) -> float:
    return fluctuation_time(mass, planck_length(k), k)


def velocity_resolution(pair: BodyPair, which: Which, k: PhysicalConstants) -> float:
    """
    Computes the best velocity resolution achievable from Doppler-shifted photon trains, `tau c^2 / r`.

    :param pair: Body pair.
    :param which: Body whose fluctuation time sets the resolution.
    :param k: Physical constants.
    :returns: The resolution.
    """
    return _tau(pair.body(which).mass, k) * k.c**2 / pair.separation


def measured_acceleration(source: MacroObject, r: float, k: PhysicalConstants) -> float:
    """
    Computes the emergent acceleration caused by a body at distance `r`. The result does not depend on any property
    of the observer.

    :param source: Body whose mass sets the fluctuation time.
    :param r: Distance.
    :param k: Physical constants.
    :raises InvalidParameterError: If the distance is not positive.
    :returns: `-dv^2 / (2 c tau)`, which equals `-G M / (2 r^2)`.
    """
    if not r > 0:
        raise InvalidParameterError(f"Distance must be positive: {r}")
    tau: Final = _tau(source.mass, k)
    dv: Final = tau * k.c**2 / r
    return -(dv**2) / (2.0 * k.c * tau)


def relative_measured_acceleration(pair: BodyPair, k: PhysicalConstants) -> float:
    """
    Computes the relative acceleration `a_A - a_B`. Body B registers the relative velocity with the opposite sign,
    so both bodies contribute to the attraction.

    :param pair: Body pair.
    :param k: Physical constants.
    :returns: `-G (M_A + M_B) / (2 r^2)`.
    """
    a_a: Final = measured_acceleration(pair.a, pair.separation, k)
    a_b: Final = -measured_acceleration(pair.b, pair.separation, k)
    return a_a - a_b


def split_accelerations(pair: BodyPair, a_rel: float) -> tuple[float, float]:
    """
    Splits a relative acceleration between the two bodies so that total momentum is conserved.

    :param pair: Body pair.
    :param a_rel: Relative acceleration `a_A - a_B`. Must be negative (attraction).
    :raises InvalidParameterError: If `a_rel` is not negative.
    :returns: `(a'_A, a'_B)` with `M_A a'_A + M_B a'_B = 0` and `a'_A - a'_B = a_rel`.
    """
    if not a_rel < 0:
        raise InvalidParameterError(f"The relative acceleration must be attractive: {a_rel}")
    total: Final = pair.total_mass
    return a_rel * pair.b.mass / total, -a_rel * pair.a.mass / total


def resolution_threshold(tau_emit: float, t0: float, c: float) -> float:
    """
    Computes the smallest velocity difference that two photon trains separated by `tau_emit` can resolve after a
    flight time `t0`. With `t0 = r / c` this equals `velocity_resolution`.

    :param tau_emit: Emission period.
    :param t0: Flight time.
    :param c: Speed of light.
    :raises InvalidParameterError: If `t0` is not positive.
    :returns: `tau_emit c / t0`.
    """
    if not t0 > 0:
        raise InvalidParameterError(f"Flight time must be positive: {t0}")
    return tau_emit * c / t0


def chain_report(pair: BodyPair, which: Which, k: PhysicalConstants) -> ChainReport:
    """
    Evaluates the full chain for one body of a pair.

    :param pair: Body pair.
    :param which: Body to report on.
    :param k: Physical constants.
    :returns: The report.
    """
    tau: Final = _tau(pair.body(which).mass, k)
    return ChainReport(
        l0=planck_length(k),
        tau_a=tau,
        dv_a=velocity_resolution(pair, which, k),
        a_measured=measured_acceleration(pair.body(which), pair.separation, k),
        lyapunov_exponent=1.0 / tau,
        friction_estimate=1.0 / tau,
    )


def drift_model(pair: BodyPair, which: Which, k: PhysicalConstants) -> DiffusionModel:
    """
    Builds the diffusion model whose drift is the chain's measured acceleration.

    :param pair: Body pair.
    :param which: Body whose mass sets the fluctuation time.
    :param k: Physical constants.
    :returns: A model with `dv_rms` = velocity resolution, `tau` = fluctuation time and `c` = `k.c`.
    """
    return DiffusionModel(dv_rms=velocity_resolution(pair, which, k), tau=_tau(pair.body(which).mass, k), c=k.c)


def check_separation(
    pair: BodyPair, k: PhysicalConstants, ratio: float = DEFAULT_SEPARATION_RATIO
) -> SeparationReport:
    """
    Checks that the bodies are far apart compared to the distance light travels in one fluctuation time.

    :param pair: Body pair.
    :param k: Physical constants.
    :param ratio: (Optional) Smallest accepted `r / (c tau)`.
    :returns: The report.
    """
    report: Final = SeparationReport(
        ratio_a=pair.separation / (k.c * _tau(pair.a.mass, k)),
        ratio_b=pair.separation / (k.c * _tau(pair.b.mass, k)),
        threshold=ratio,
    )
    if not report.passed:
        log.warning(
            "Separation %g is not large compared to c tau (ratios %g, %g)",
            pair.separation,
            report.ratio_a,
            report.ratio_b,
        )
    return report
