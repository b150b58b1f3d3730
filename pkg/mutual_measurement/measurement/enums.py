"""
:Description: Provides enumerated types used by the measurement toy.
"""

from __future__ import annotations

from enum import IntEnum, StrEnum
from typing import Final


class Branch(IntEnum):
    """
    Basis states of the combined (source CM, observer internal state) system. The values are matrix indices.
    """

    F1_S = 0  # Source in velocity component 1, observer not yet affected
    F2_S = 1  # Source in velocity component 2, observer not yet affected
    F1_S1 = 2  # Observer recorded component 1
    F2_S2 = 3  # Observer recorded component 2

    @property
    def label(self) -> str:
        """
        :returns: Human-readable label of the basis state.
        """
        return _BRANCH_LABELS[self]


_BRANCH_LABELS: Final[dict[Branch, str]] = {
    Branch.F1_S: "f1 S",
    Branch.F2_S: "f2 S",
    Branch.F1_S1: "f1 S1",
    Branch.F2_S2: "f2 S2",
}


class MeasurementStage(StrEnum):
    """
    Stages a measurement state passes through, in order.
    """

    INITIAL = "initial"
    ENTANGLED = "entangled"
    DECOHERED = "decohered"
    COLLAPSED = "collapsed"
