"""
:Description: Provides public types, type aliases, and constants used by all modules.
"""

from __future__ import annotations

from typing import Final, Union

import numpy as np
import numpy.typing as npt

# Base types that can store value
Primitives = Union[str, int, float, bool, None]

# Type that represents a JSON-like type
JsonType = Union[dict[str, "JsonType"], list["JsonType"], Primitives]

# A JSON object must be have string keys.
JsonObjectType = dict[str, JsonType]

# Types that build up to types used in `jsonschema`s
SchemaPrimitives = Union[str, int, float, bool, None]
SchemaDetails = Union[dict[str, "SchemaDetails"], list["SchemaDetails"], SchemaPrimitives]
# Type for a schema object used by the `jsonschema` library
SchemaType = dict[str, SchemaDetails]

# Array aliases used by the numerical modules
FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]
IntArray = npt.NDArray[np.int64]

# Absolute tolerance used when checking probability normalization.
NORMALIZATION_TOLERANCE: Final[float] = 1e-12
