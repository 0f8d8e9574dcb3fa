"""Terminal User Interface (TUI) components and utilities."""

from .display import (
    DisplayContext,
    DisplayMessage,
    DisplayResult,
    default_context,
    display_message,
    info_message,
    success_message,
    warning_message,
)
from .progress import TimestepProgress, timestep_progress
from .tables import create_multi_column_table, display_table, format_cell
from .types import ConsoleProtocol, DisplayError, console

__all__ = [
    "ConsoleProtocol",
    "DisplayContext",
    "DisplayError",
    "DisplayMessage",
    "DisplayResult",
    "TimestepProgress",
    "console",
    "create_multi_column_table",
    "default_context",
    "display_message",
    "display_table",
    "format_cell",
    "info_message",
    "success_message",
    "timestep_progress",
    "warning_message",
]
