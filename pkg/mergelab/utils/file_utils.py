"""File utilities."""

import os
from dataclasses import dataclass
from pathlib import Path

from expression import Error, Ok, Result


@dataclass(frozen=True)
class FileError:
    message: str
    path: str

    def __str__(self) -> str:
        return f"{self.message}: {self.path}"


def ensure_directory(path: Path) -> Result[Path, FileError]:
    """Ensure a directory exists and is writable."""
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        return Error(FileError(f"Failed to create directory ({e.strerror})", str(path)))
    if not os.access(path, os.W_OK):
        return Error(FileError("Directory is not writable", str(path)))
    return Ok(path)


def write_file(path: Path, content: str) -> Result[Path, FileError]:
    """Write content to file, creating parent directories."""
    return ensure_directory(path.parent).bind(lambda _: _write(path, content))


def _write(path: Path, content: str) -> Result[Path, FileError]:
    try:
        path.write_text(content, encoding="utf-8")
        return Ok(path)
    except OSError as e:
        return Error(FileError(f"Failed to write file ({e.strerror})", str(path)))


def append_line(path: Path, line: str) -> Result[Path, FileError]:
    try:
        with path.open("a", encoding="utf-8") as f:
            f.write(line.rstrip("\n") + "\n")
        return Ok(path)
    except OSError as e:
        return Error(FileError(f"Failed to append to file ({e.strerror})", str(path)))


def read_file(path: Path) -> Result[str, FileError]:
    try:
        return Ok(path.read_text(encoding="utf-8"))
    except OSError as e:
        return Error(FileError(f"Failed to read file ({e.strerror})", str(path)))
