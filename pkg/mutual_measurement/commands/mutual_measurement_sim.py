"""
:Description: Base CLI for all `mutual-measurement-sim` commands
"""

from __future__ import annotations

import logging
import sys

import click

from mutual_measurement.commands.list_experiments import list_experiments
from mutual_measurement.commands.run import run
from mutual_measurement.commands.utils.types import CONTEXT_SETTINGS
from mutual_measurement.commands.validate import validate


@click.group(context_settings=CONTEXT_SETTINGS)
@click.option(
    "-v",
    "--verbose",
    is_flag=True,
    default=False,
    show_default=True,
    help="Enables verbose logging (shows all log levels).",
)
@click.version_option(package_name="mutual_measurement")
def mutual_measurement_sim(verbose: bool) -> None:
    """
    Command line interface for measurement-induced diffusion experiments.
    """
    # Initialize the logger, available to all commands.
    logging.basicConfig(
        format="%(asctime)s[%(levelname)s][%(name)s]: %(message)s",
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
    )


mutual_measurement_sim.add_command(run)
mutual_measurement_sim.add_command(validate)
mutual_measurement_sim.add_command(list_experiments)


if __name__ == "__main__":
    mutual_measurement_sim(False)
