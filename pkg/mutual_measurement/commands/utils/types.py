"""
:Description: Contains types and constants used by CLI commands.
"""

from __future__ import annotations

from enum import IntEnum

# Click context settings shared by every command
CONTEXT_SETTINGS = {"help_option_names": ["-h", "--help"]}


class ExitCode(IntEnum):
    """
    Error codes to return upon command completion. A non-zero code is returned exactly when an error was reported.

    All commands define their error codes here, so that every failure mode has its own code.
    """

    ## All Commands ##
    SUCCESS = 0
    CLICK_ERROR = 1  # Controlled by the `click` library
    CLICK_USAGE = 2  # Controlled by the `click` library
    IO_ERROR = 3

    ## validate, run ##
    CONFIG_ERROR = 10

    ## run ##
    RUN_ERROR = 20
