"""
:Description: Loads experiment files on behalf of the CLI and reports failures with the matching exit code.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Final, NoReturn

from mutual_measurement.commands.utils.print import print_err
from mutual_measurement.commands.utils.types import ExitCode
from mutual_measurement.experiments.config import ExperimentConfig, load_config
from mutual_measurement.experiments.exceptions import ConfigValidationError

log: Final = logging.getLogger(__name__)


def exit_with_config_errors(path: Path, e: ConfigValidationError) -> NoReturn:
    """
    Prints every validation error of an experiment file and exits.

    :param path: Path to the experiment file.
    :param e: Validation failure.
    """
    print_err(f"Invalid experiment file `{path}` ({len(e.errors)} error(s)):")
    for error in e.errors:
        print_err(f"  - {error}")
    sys.exit(ExitCode.CONFIG_ERROR)


def load_or_exit(path: Path) -> ExperimentConfig:
    """
    Loads an experiment file. Exits with `ExitCode.CONFIG_ERROR` or `ExitCode.IO_ERROR` on failure.

    :param path: Path to the experiment file.
    :returns: The validated configuration.
    """
    try:
        return load_config(path)
    except ConfigValidationError as e:
        exit_with_config_errors(path, e)
    except OSError as e:
        log.error("Could not read %s: %s", path, e)
        print_err(f"Couldn't read the experiment file: {path}")
        sys.exit(ExitCode.IO_ERROR)
