from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass

from rich.console import Console
from rich.progress import (
    BarColumn,
    Progress,
    TaskID,
    TaskProgressColumn,
    TextColumn,
    TimeElapsedColumn,
    TimeRemainingColumn,
)

from .types import console as default_console


@dataclass
class TimestepProgress:
    """Advances a rich progress bar by environment timesteps."""

    progress: Progress
    task_id: TaskID

    def update(self, timestep: int, description: str | None = None) -> None:
        if description is None:
            self.progress.update(self.task_id, completed=timestep)
        else:
            self.progress.update(self.task_id, completed=timestep, description=description)


@contextmanager
def timestep_progress(
    description: str, total: int, console: Console | None = None, enabled: bool = True
) -> Iterator[TimestepProgress]:
    progress = Progress(
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        TimeElapsedColumn(),
        TimeRemainingColumn(),
        console=console or default_console,
        disable=not enabled,
    )
    with progress:
        yield TimestepProgress(progress, progress.add_task(description, total=total))
