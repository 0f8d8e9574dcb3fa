"""Plumbing shared by the commands: config resolution, run artifacts and result tables."""

import json
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, TypeVar

from expression import Error, Ok, Result

from mergelab.config import (
    Command,
    ConfigError,
    Manifest,
    RunConfig,
    resolve_run_config,
    scenario_for,
    write_manifest,
)
from mergelab.evaluation.records import MERGE_CSV_FORMAT_VERSION, EvaluationSummary
from mergelab.rl.checkpoint import (
    CHECKPOINT_FORMAT_VERSION,
    CheckpointDocument,
    CheckpointError,
    save_checkpoint,
)
from mergelab.rl.trainer import (
    TRAINING_LOG_FORMAT_VERSION,
    EvalRecord,
    UpdateRecord,
    parse_record,
    training_curve_csv,
)
from mergelab.sim.trajectory import TRAJECTORY_FORMAT_VERSION
from mergelab.tui import (
    DisplayContext,
    DisplayError,
    create_multi_column_table,
    display_table,
    format_cell,
)
from mergelab.utils.error_handling import CommandError
from mergelab.utils.file_utils import FileError, append_line, ensure_directory, read_file, write_file
from mergelab.utils.functional import sequence_results

T = TypeVar("T")

MANIFEST_FORMATS = {
    "checkpoint": CHECKPOINT_FORMAT_VERSION,
    "training_log": TRAINING_LOG_FORMAT_VERSION,
    "merge_csv": MERGE_CSV_FORMAT_VERSION,
    "trajectory_csv": TRAJECTORY_FORMAT_VERSION,
}

TRAINING_LOG = "training_log.jsonl"
TRAINING_CURVE = "training_curve.csv"
LATEST_CHECKPOINT = "checkpoint.json"
CHECKPOINT_DIR = "checkpoints"


def config_error(e: ConfigError) -> CommandError:
    return CommandError(e.kind, str(e), e.exit_code)


def checkpoint_error(e: CheckpointError) -> CommandError:
    return CommandError(f"checkpoint_{e.tag}", str(e))


def file_error(e: FileError) -> CommandError:
    return CommandError("io_error", str(e))


def display_error(e: DisplayError) -> CommandError:
    return CommandError("display_error", str(e))


def or_raise(result: Result[T, CommandError]) -> T:
    """Unwrap inside callbacks that cannot return a Result."""
    if result.is_ok():
        return result.ok
    raise result.error


def resolve(
    command: Command, flags: dict[str, Any], config_file: Path | None
) -> Result[RunConfig, CommandError]:
    return resolve_run_config(command, flags, config_file).map_error(config_error)


def require_checkpoint(run: RunConfig) -> Result[Path, CommandError]:
    if run.checkpoint is None:
        return Error(CommandError("missing_checkpoint", f"{run.command} needs --checkpoint"))
    return Ok(run.checkpoint)


def prepare_output(run: RunConfig) -> Result[RunConfig, CommandError]:
    return ensure_directory(run.out).map_error(file_error).map(lambda _: run)


def record_manifest(run: RunConfig, seeds: dict[str, Any]) -> Result[RunConfig, CommandError]:
    manifest = Manifest(run=run, scenario=scenario_for(run), formats=MANIFEST_FORMATS, seeds=seeds)
    return write_manifest(run.out, manifest).map_error(file_error).map(lambda _: run)


def write_json(path: Path, document: Any) -> Result[Path, CommandError]:
    return write_file(path, json.dumps(document, indent=2, sort_keys=True) + "\n").map_error(file_error)


def write_text(path: Path, text: str) -> Result[Path, CommandError]:
    return write_file(path, text).map_error(file_error)


# -- training artifacts -----------------------------------------------------


def checkpoint_paths(out: Path, timestep: int) -> tuple[Path, Path]:
    """Numbered checkpoint and the latest-checkpoint alias."""
    return out / CHECKPOINT_DIR / f"ckpt_{timestep}.json", out / LATEST_CHECKPOINT


def store_checkpoint(out: Path, doc: CheckpointDocument) -> None:
    saved = sequence_results([save_checkpoint(path, doc) for path in checkpoint_paths(out, doc.timestep)])
    or_raise(saved.map_error(checkpoint_error))


def log_sink(path: Path) -> Callable[[UpdateRecord | EvalRecord], None]:
    def sink(record: UpdateRecord | EvalRecord) -> None:
        or_raise(append_line(path, record.model_dump_json()).map_error(file_error))

    return sink


def read_log(path: Path) -> Result[list[UpdateRecord | EvalRecord], CommandError]:
    return (
        read_file(path)
        .map_error(file_error)
        .map(lambda text: [parse_record(line) for line in text.splitlines() if line.strip()])
    )


def start_log(path: Path, resume_timestep: int) -> Result[Path, CommandError]:
    """Fresh runs start an empty log; resumed runs drop records past the checkpoint."""
    if resume_timestep == 0 or not path.exists():
        return write_text(path, "")
    return read_log(path).bind(
        lambda records: write_text(
            path,
            "".join(r.model_dump_json() + "\n" for r in records if r.timestep <= resume_timestep),
        )
    )


def write_training_curve(out: Path) -> Result[Path, CommandError]:
    return read_log(out / TRAINING_LOG).bind(
        lambda records: write_text(out / TRAINING_CURVE, training_curve_csv(records))
    )


# -- result tables ----------------------------------------------------------

SUMMARY_ROWS: tuple[tuple[str, Callable[[EvaluationSummary], float | int | None]], ...] = (
    ("Episodes", lambda s: s.n_episodes),
    ("Merges", lambda s: s.n_merges),
    ("Timeouts", lambda s: s.n_timeouts),
    ("Collisions (%)", lambda s: s.collision_pct),
    ("Conflicts (%)", lambda s: s.conflict_pct),
    ("Mean merge velocity (m/s)", lambda s: s.mean_merge_velocity),
    ("TTC L1 < 10 s (%)", lambda s: s.pct_ttc_l1_below_10s),
    ("TTC T1 < 10 s (%)", lambda s: s.pct_ttc_t1_below_10s),
    ("Gc/G0 > 0.5 (%)", lambda s: s.pct_gap_ratio_above_half),
)


def summary_rows(columns: Sequence[EvaluationSummary | None]) -> list[list[str]]:
    """One row per metric; a missing column renders as dashes."""
    return [
        [name, *(format_cell(None if s is None else metric(s)) for s in columns)]
        for name, metric in SUMMARY_ROWS
    ]


def show_summary_table(
    ctx: DisplayContext, title: str, labels: Sequence[str], columns: Sequence[EvaluationSummary | None]
) -> Result[None, CommandError]:
    return (
        create_multi_column_table(title, ["Metric", *labels], summary_rows(columns))
        .bind(lambda table: display_table(ctx, table))
        .map_error(display_error)
    )
