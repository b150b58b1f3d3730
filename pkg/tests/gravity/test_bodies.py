"""
:Description: Tests the body descriptions.
"""

from __future__ import annotations

import pytest

from mutual_measurement.gravity.bodies import BodyPair, MacroObject, Which
from mutual_measurement.physics.exceptions import InvalidParameterError


def test_pair_selection() -> None:
    """
    Bodies are selected by `Which` and the total mass adds up.
    """
    a = MacroObject(mass=2.0)
    b = MacroObject(mass=3.0)
    pair = BodyPair(a=a, b=b, separation=1.0)
    assert pair.body(Which.A) is a
    assert pair.body(Which.B) is b
    assert pair.total_mass == 5.0


def test_to_json_omits_unset_properties() -> None:
    """
    Only set properties are rendered.
    """
    assert MacroObject(mass=1.0, temperature=0.0).to_json() == {"mass": 1.0, "temperature": 0.0}


@pytest.mark.parametrize(
    "kwargs",
    [
        {"mass": 0.0},
        {"mass": 1.0, "density": 0.0},
        {"mass": 1.0, "size": -1.0},
        {"mass": 1.0, "surface_area": 0.0},
        {"mass": 1.0, "temperature": -1.0},
    ],
)
def test_invalid_bodies(kwargs: dict[str, float]) -> None:
    """
    Masses and optional properties must be positive; temperatures may be zero.

    :param kwargs: Invalid body properties
    """
    with pytest.raises(InvalidParameterError):
        MacroObject(**kwargs)


def test_invalid_separation() -> None:
    """
    Bodies must be apart.
    """
    with pytest.raises(InvalidParameterError):
        BodyPair(a=MacroObject(mass=1.0), b=MacroObject(mass=1.0), separation=0.0)
