"""
:Description: CLI for listing the available experiments.
"""

from __future__ import annotations

import sys

import click

from mutual_measurement.commands.utils.print import print_out
from mutual_measurement.commands.utils.types import CONTEXT_SETTINGS, ExitCode
from mutual_measurement.experiments.config import DEFAULT_UNIT_MODES, EXPERIMENT_DESCRIPTIONS, ExperimentName


@click.command(short_help="Lists the available experiments.", context_settings=CONTEXT_SETTINGS)
def list_experiments() -> None:
    """
    Lists every experiment name accepted in the `experiment` key of an experiment file, with its default unit mode.
    """
    width = max(len(str(e)) for e in ExperimentName)
    for experiment in ExperimentName:
        print_out(
            f"{str(experiment):<{width}}  [{DEFAULT_UNIT_MODES[experiment]}]  {EXPERIMENT_DESCRIPTIONS[experiment]}"
        )
    sys.exit(ExitCode.SUCCESS)
