"""Shared utilities: error handling, functional helpers and file access."""

from .error_handling import (
    CommandError,
    ContractViolation,
    RolloutError,
    SimulatorDefect,
    TrainingDivergence,
    format_error_line,
    handle_command_errors,
    require,
)
from .file_utils import FileError, append_line, ensure_directory, read_file, write_file
from .functional import sequence_results

__all__ = [
    "CommandError",
    "ContractViolation",
    "FileError",
    "RolloutError",
    "SimulatorDefect",
    "TrainingDivergence",
    "append_line",
    "ensure_directory",
    "format_error_line",
    "handle_command_errors",
    "read_file",
    "require",
    "sequence_results",
    "write_file",
]
