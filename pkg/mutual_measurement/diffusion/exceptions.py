"""
:Description: Provides exceptions thrown by the diffusion engine.
"""

from __future__ import annotations

from typing import Optional


class DiffusionException(Exception):
    """
    Base exception for all other diffusion exceptions. Should not be raised directly.
    """


class StabilityError(DiffusionException):
    """
    Exception raised when an explicit step is requested with a time step above the stability bound of the scheme.
    """

    def __init__(self, dt: float, bound: float):
        """
        Constructs a stability exception.

        :param dt: Requested time step.
        :param bound: Largest stable time step.
        """
        self.dt = dt
        self.bound = bound
        self.message = f"Time step {dt!r} exceeds the stability bound {bound!r}."
        super().__init__(self.message)


class NegativeMassError(DiffusionException):
    """
    Exception raised when a step produces a cell mass that is too negative to be rounding noise.
    """

    def __init__(self, min_mass: float, time: float):
        """
        Constructs a negative mass exception.

        :param min_mass: Most negative cell mass.
        :param time: Simulation time at which the mass was found.
        """
        self.message = f"Cell mass {min_mass!r} at t={time!r} is below the clipping tolerance; the run is unstable."
        super().__init__(self.message)


class BoundaryContainmentError(DiffusionException):
    """
    Exception raised when too much probability reaches the edges of the velocity grid.
    """

    def __init__(self, edge_mass: float, limit: float, time: float):
        """
        Constructs a boundary containment exception.

        :param edge_mass: Probability in the outermost cells.
        :param limit: Largest accepted edge probability.
        :param time: Simulation time at which the violation was found.
        """
        self.message = (
            f"Probability {edge_mass!r} in the outermost grid cells exceeds {limit!r} at t={time!r}."
            " Widen the velocity grid."
        )
        super().__init__(self.message)


class ValidityExceededError(DiffusionException):
    """
    Exception raised when an ensemble sample gets too close to the speed of light for the model to hold.
    """

    def __init__(self, velocity: float, c: float, time: float):
        """
        Constructs a validity exception.

        :param velocity: Offending sample velocity.
        :param c: Speed of light.
        :param time: Simulation time at which the sample was found.
        """
        self.message = f"Sample velocity {velocity!r} at t={time!r} is too close to c={c!r}; model validity exceeded."
        super().__init__(self.message)


class NoStationaryStateError(DiffusionException):
    """
    Exception raised when a stationary width is requested for a model without friction.
    """

    def __init__(self, message: Optional[str] = None):
        """
        Constructs a missing stationary state exception.

        :param message: String description of the issue encountered.
        """
        self.message = message if message else "Free diffusion (gamma == 0) has no stationary width."
        super().__init__(self.message)
