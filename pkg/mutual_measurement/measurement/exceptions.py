"""
:Description: Provides exceptions thrown by the measurement toy.
"""

from __future__ import annotations

from mutual_measurement.measurement.enums import MeasurementStage


class MeasurementException(Exception):
    """
    Base exception for all other measurement exceptions. Should not be raised directly.
    """


class MeasurementStageError(MeasurementException):
    """
    Exception raised when an operation is applied to a state in the wrong stage of the pipeline.
    """

    def __init__(self, operation: str, expected: MeasurementStage, actual: MeasurementStage):
        """
        Constructs a measurement stage exception.

        :param operation: Name of the rejected operation.
        :param expected: Stage the operation requires.
        :param actual: Stage the state was in.
        """
        self.message = f"`{operation}` requires a state in stage `{expected}`, got `{actual}`."
        super().__init__(self.message)


class InvalidWeightsError(MeasurementException):
    """
    Exception raised when the branch weights of an initial state are negative or not normalized.
    """

    def __init__(self, weight_f1: float, weight_f2: float):
        """
        Constructs an invalid weights exception.

        :param weight_f1: Weight of the first velocity component.
        :param weight_f2: Weight of the second velocity component.
        """
        self.message = f"Weights must be non-negative and sum to 1, got ({weight_f1!r}, {weight_f2!r})."
        super().__init__(self.message)


class InvalidDensityMatrixError(MeasurementException):
    """
    Exception raised when a matrix is not a valid density matrix (Hermitian, unit trace, positive semidefinite).
    """

    def __init__(self, message: str):
        """
        Constructs an invalid density matrix exception.

        :param message: String description of the issue encountered.
        """
        self.message = message if message else "The matrix is not a valid density matrix."
        super().__init__(self.message)
