"""
:Description: Provides least-squares fitting helpers used to extract rates and exponents from experiment output.
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import Final

import numpy as np


def fit_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """
    Fits a straight line through `(x, y)` by least squares and returns its slope.

    :param x: Abscissae. At least two distinct values are required.
    :param y: Ordinates.
    :raises ValueError: If fewer than two points are provided or the lengths differ.
    :returns: The fitted slope.
    """
    if len(x) != len(y):
        raise ValueError(f"Length mismatch: {len(x)} abscissae vs {len(y)} ordinates")
    if len(x) < 2:
        raise ValueError("At least two points are required to fit a slope")
    coefficients: Final = np.polyfit(np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64), 1)
    return float(coefficients[0])


def fit_loglog_exponent(x: Sequence[float], y: Sequence[float]) -> float:
    """
    Fits the exponent `n` of a power law `|y| ~ x**n`.

    :param x: Positive abscissae.
    :param y: Non-zero ordinates. Only magnitudes are used.
    :returns: The fitted exponent.
    """
    return fit_slope(np.log(np.asarray(x, dtype=np.float64)).tolist(), np.log(np.abs(np.asarray(y))).tolist())
