"""
:Description: Provides print utility functions. Run records and listings go to STDOUT so that they can be piped; every
    reported error goes to STDERR.
"""

from __future__ import annotations

import sys

from mutual_measurement.experiments.writers import render_json
from mutual_measurement.types import JsonType


def print_out(*args, **kwargs) -> None:  # type: ignore
    """
    Prints to STDOUT.
    """
    print(*args, file=sys.stdout, **kwargs)  # type: ignore


def print_err(*args, **kwargs) -> None:  # type: ignore
    """
    Prints to STDERR.
    """
    print(*args, file=sys.stderr, **kwargs)  # type: ignore


def print_json(data: JsonType) -> None:
    """
    Prints JSON data to STDOUT, rendered exactly as it is written to `summary.json`.

    :param data: JSON data to print.
    """
    sys.stdout.write(render_json(data))
