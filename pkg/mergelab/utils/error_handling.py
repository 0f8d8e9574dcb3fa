"""Error types and command error handling following the Railway-Oriented Programming pattern."""

import functools
import sys
from collections.abc import Callable
from typing import Any, TypeVar

import typer
from expression import Error, Ok, Result

T = TypeVar("T")


class ContractViolation(ValueError):
    """A caller broke an operation's precondition."""


class SimulatorDefect(RuntimeError):
    """The simulator reached a state its models must never produce."""


class TrainingDivergence(RuntimeError):
    """The optimization objective became non-finite."""

    def __init__(self, message: str, diagnostics: dict[str, float]) -> None:
        super().__init__(f"{message}: {diagnostics}")
        self.diagnostics = diagnostics


class RolloutError(RuntimeError):
    """An environment failed while experience was being collected."""

    def __init__(self, env_index: int, timestep: int, cause: BaseException) -> None:
        super().__init__(f"environment {env_index} failed at timestep {timestep}: {cause}")
        self.env_index = env_index
        self.timestep = timestep


class CommandError(Exception):
    """A command failed with a reportable kind."""

    def __init__(self, kind: str, message: str, exit_code: int = 1) -> None:
        super().__init__(message)
        self.kind = kind
        self.exit_code = exit_code


def require(condition: bool, message: str) -> None:
    """Raise ContractViolation unless condition holds."""
    if not condition:
        raise ContractViolation(message)


def error_kind(e: Exception) -> str:
    match e:
        case CommandError():
            return e.kind
        case ContractViolation():
            return "contract_violation"
        case SimulatorDefect():
            return "simulator_defect"
        case TrainingDivergence():
            return "training_divergence"
        case RolloutError():
            return "rollout_error"
        case OSError():
            return "io_error"
        case _:
            return type(e).__name__.lower()


def format_error_line(kind: str, message: str) -> str:
    """Single machine-parsable error line."""
    flat = " ".join(str(message).split()).replace('"', "'")
    return f'error kind={kind} message="{flat}"'


def _on_error(e: Exception) -> None:
    sys.stderr.write(format_error_line(error_kind(e), str(e)) + "\n")
    raise typer.Exit(e.exit_code if isinstance(e, CommandError) else 1)


def handle_command_errors(fn: Callable[..., T]) -> Callable[..., T]:
    def handle_result(r: Result[T, Exception]) -> T:
        return r.ok if r.is_ok() else _on_error(r.error)

    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> T:
        try:
            result = fn(*args, **kwargs)
            if isinstance(result, Result):
                return handle_result(result)
            return handle_result(Ok(result))
        except typer.Exit:
            raise
        except Exception as e:
            return handle_result(Error(e))

    return wrapper
