"""
:Description: CLI for running an experiment file.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Final, Optional

import click

from mutual_measurement.commands.utils.config_loading import exit_with_config_errors, load_or_exit
from mutual_measurement.commands.utils.print import print_err, print_json
from mutual_measurement.commands.utils.types import CONTEXT_SETTINGS, ExitCode
from mutual_measurement.experiments import runner
from mutual_measurement.experiments.exceptions import ConfigValidationError, ExperimentRunError

log: Final = logging.getLogger(__name__)


# In order for `click` to play nice with `pyfakefs`, we set `path_type=str` and delay converting to a `Path` instance.
# See: https://pytest-pyfakefs.readthedocs.io/en/latest/troubleshooting.html#pathlib-path-objects-created-outside-of-tests


@click.command(short_help="Runs an experiment file.", context_settings=CONTEXT_SETTINGS)
@click.argument("config_path", type=click.Path(exists=True, path_type=str))
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Overrides the master seed of the file.")
@click.option(
    "--out",
    "output_dir",
    type=click.Path(file_okay=False, path_type=str),
    default=None,
    help="Overrides the output directory of the file.",
)
def run(config_path: str, seed: Optional[int], output_dir: Optional[str]) -> None:
    """
    Runs the experiment described by an experiment file, writes its CSV files and `summary.json` to the output
    directory and prints the run record.

    CONFIG_PATH: Path to the YAML experiment file
    """
    path: Final = Path(config_path)
    config = load_or_exit(path)
    try:
        config = config.with_overrides(seed=seed, output_dir=output_dir)
    except ConfigValidationError as e:
        exit_with_config_errors(path, e)

    error_code = ExitCode.SUCCESS
    try:
        record = runner.run(config)
        print_json(record.to_json())
    except ExperimentRunError as e:
        log.error("Experiment `%s` failed: %s", e.experiment, e.cause)
        print_err(e.message)
        error_code = ExitCode.RUN_ERROR
    except OSError as e:
        log.error("Could not write the outputs to %s: %s", config.output_dir, e)
        print_err(f"Couldn't write the outputs to: {config.output_dir}")
        error_code = ExitCode.IO_ERROR
    sys.exit(error_code)
