"""
:Description: Provides convenience utilities used by all modules.
"""

from __future__ import annotations

import importlib.metadata
import logging
from typing import Final

log: Final = logging.getLogger(__name__)

# Reported when the package metadata is not available, e.g. when running from an uninstalled source tree.
UNKNOWN_VERSION: Final[str] = "0+unknown"


def get_package_version() -> str:
    """
    Convenience function to programmatically acquire the version of this project. This value is embedded in every run
    record for reproducibility.

    :returns: The current version of `mutual_measurement`, or `UNKNOWN_VERSION` if the package is not installed.
    """
    try:
        return importlib.metadata.version(__name__.split(".", maxsplit=1)[0])
    except importlib.metadata.PackageNotFoundError:
        log.warning("Package metadata not found, recording version %s", UNKNOWN_VERSION)
        return UNKNOWN_VERSION
