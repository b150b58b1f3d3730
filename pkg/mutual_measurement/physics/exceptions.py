"""
:Description: Provides exceptions thrown by the physics modules. These are shared by every other numerical module.
"""

from __future__ import annotations

from typing import Optional


class PhysicsException(Exception):
    """
    Base exception for all other physics exceptions. Should not be raised directly.
    """


class InvalidParameterError(PhysicsException):
    """
    Exception raised when an input value breaks the invariants of the type or operation it was given to.
    """

    def __init__(self, message: Optional[str] = None):
        """
        Constructs an invalid parameter exception.

        :param message: String description of the issue encountered.
        """
        self.message = message if message else "A parameter was rejected by validation."
        super().__init__(self.message)


class DomainViolationError(PhysicsException):
    """
    Exception raised when a model is evaluated outside of its domain of validity (for example, at `v >= c`).
    """

    def __init__(self, message: Optional[str] = None):
        """
        Constructs a domain violation exception.

        :param message: String description of the issue encountered.
        """
        self.message = message if message else "A model was evaluated outside of its domain of validity."
        super().__init__(self.message)


class MomentumConservationError(InvalidParameterError):
    """
    Exception raised when a pair of cross-measured velocity increments does not conserve momentum.
    """

    def __init__(self, delta_a1: float, delta_a2: float):
        """
        Constructs a momentum conservation exception.

        :param delta_a1: Cross-measured increment of the first half.
        :param delta_a2: Cross-measured increment of the second half.
        """
        super().__init__(
            f"Cross-measured increments must cancel, got {delta_a1!r} + {delta_a2!r} = {delta_a1 + delta_a2!r}"
        )
