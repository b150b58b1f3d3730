"""
:Description: Tests the `list-experiments` CLI
"""

from typing import Final

from click.testing import CliRunner

from mutual_measurement.commands.list_experiments import list_experiments
from mutual_measurement.commands.utils.types import ExitCode
from mutual_measurement.experiments.config import ExperimentName


def test_lists_every_experiment() -> None:
    """
    One line per experiment, with its default unit mode.
    """
    runner: Final = CliRunner()
    result: Final = runner.invoke(list_experiments, [])
    assert result.exit_code == ExitCode.SUCCESS
    lines: Final = result.output.splitlines()
    assert len(lines) == len(ExperimentName)
    assert lines[0].startswith("measurement-demo")
    assert "[si]" in next(line for line in lines if line.startswith("newton-sweep"))
