"""
:Description: Provides exceptions thrown while configuring and running experiments.
"""

from __future__ import annotations

from collections.abc import Sequence


class ExperimentException(Exception):
    """
    Base exception for all other experiment exceptions. Should not be raised directly.
    """


class ConfigValidationError(ExperimentException):
    """
    Exception raised when an experiment file is malformed or breaks its schema. Carries every error found, not only
    the first one.
    """

    def __init__(self, errors: Sequence[str]):
        """
        Constructs a configuration validation exception.

        :param errors: Human-readable errors, each prefixed with the offending key path.
        """
        self.errors: list[str] = list(errors)
        self.message = "Invalid experiment configuration:\n" + "\n".join(f"  - {e}" for e in self.errors)
        super().__init__(self.message)


class ExperimentRunError(ExperimentException):
    """
    Exception raised when a numerical module fails while running an experiment.
    """

    def __init__(self, experiment: str, cause: Exception):
        """
        Constructs an experiment run exception.

        :param experiment: Name of the failing experiment.
        :param cause: Exception raised by the numerical module.
        """
        self.experiment = experiment
        self.cause = cause
        self.message = f"Experiment `{experiment}` failed: {cause}"
        super().__init__(self.message)
