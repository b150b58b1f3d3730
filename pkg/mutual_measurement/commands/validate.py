"""
:Description: CLI for validating an experiment file without running it.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from mutual_measurement.commands.utils.config_loading import load_or_exit
from mutual_measurement.commands.utils.print import print_json
from mutual_measurement.commands.utils.types import CONTEXT_SETTINGS, ExitCode


@click.command(short_help="Validates an experiment file.", context_settings=CONTEXT_SETTINGS)
@click.argument("config_path", type=click.Path(exists=True, path_type=str))
def validate(config_path: str) -> None:
    """
    Validates an experiment file and prints the resolved configuration, with every default filled in. All errors in
    the file are reported, not only the first.

    CONFIG_PATH: Path to the YAML experiment file
    """
    config = load_or_exit(Path(config_path))
    print_json(config.to_json())
    sys.exit(ExitCode.SUCCESS)
