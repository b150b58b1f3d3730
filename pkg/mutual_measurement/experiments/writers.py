"""
:Description: Writes experiment outputs. CSV numbers carry 17 significant digits and JSON numbers use the shortest
    round-trip representation, so both formats reproduce the computed values exactly.
"""

from __future__ import annotations

import csv
import json
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Final

from mutual_measurement.diffusion.grid import MomentRecord
from mutual_measurement.types import JsonType

log: Final = logging.getLogger(__name__)

## Constants ##

MOMENTS_HEADER: Final[tuple[str, ...]] = ("time", "mean_v", "variance", "total_mass")
NEWTON_SWEEP_HEADER: Final[tuple[str, ...]] = ("mass_kg", "r_m", "a_measured", "a_newton_half", "ratio")
SPREADING_HEADER: Final[tuple[str, ...]] = ("time", "width")

MOMENTS_FILE: Final[str] = "moments.csv"
MOMENTS_SDE_FILE: Final[str] = "moments_sde.csv"
NEWTON_SWEEP_FILE: Final[str] = "newton_sweep.csv"
SPREADING_FILE: Final[str] = "spreading.csv"
SUMMARY_FILE: Final[str] = "summary.json"


## Functions ##


def format_number(value: float) -> str:
    """
    :param value: Number to render.
    :returns: The number with 17 significant digits.
    """
    return format(value, ".17g")


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    """
    Writes a numeric table with a header row.

    :param path: Target file. Parent directories must exist.
    :param header: Column names.
    :param rows: Rows, each with one value per column.
    :raises ValueError: If a row does not match the header.
    """
    with path.open("w", encoding="utf-8", newline="") as f:
        writer: Final = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"Row has {len(row)} values, expected {len(header)}")
            writer.writerow([format_number(v) for v in row])
    log.debug("Wrote %s", path)


def write_moments_csv(path: Path, records: Sequence[MomentRecord]) -> None:
    """
    Writes a moment series with the `MOMENTS_HEADER` columns.

    :param path: Target file.
    :param records: Moment records, in time order.
    """
    write_csv(path, MOMENTS_HEADER, ((r.time, r.mean, r.variance, r.total_mass) for r in records))


def render_json(data: JsonType) -> str:
    """
    :param data: JSON data.
    :raises ValueError: If the data holds an infinite or NaN number, which JSON cannot represent.
    :returns: Stable rendering of the data: sorted keys, two-space indentation and a trailing newline.
    """
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path: Path, data: JsonType) -> None:
    """
    Writes JSON data with `render_json`.

    :param path: Target file.
    :param data: JSON data.
    """
    path.write_text(render_json(data), encoding="utf-8")
    log.debug("Wrote %s", path)
