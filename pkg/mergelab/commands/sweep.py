"""Orientation and density sweeps: one table column per checkpoint or density."""

from pathlib import Path

import typer
from expression import Error, Ok, Result

from mergelab.config import RunConfig, evaluation_seeds
from mergelab.evaluation.harness import SweepColumn, density_sweep, svo_sweep
from mergelab.tui import DisplayContext, default_context, success_message, warning_message
from mergelab.utils.error_handling import CommandError, handle_command_errors

from .common import (
    display_error,
    prepare_output,
    record_manifest,
    require_checkpoint,
    resolve,
    show_summary_table,
    write_json,
)

# individualist, prosocial, altruistic
SVO_LABELS = ("φ=0", "φ=π/4", "φ=π/2")
SWEEP_FILE = "sweep.json"
DENSITY_SWEEP_FILE = "density_sweep.json"


def svo_columns(run: RunConfig) -> Result[dict[str, Path | None], CommandError]:
    """Checkpoints in the order of SVO_LABELS; absent ones leave their column empty."""
    if len(run.checkpoints) > len(SVO_LABELS):
        return Error(
            CommandError(
                "config_range",
                f"sweep takes at most {len(SVO_LABELS)} checkpoints, got {len(run.checkpoints)}",
                exit_code=2,
            )
        )
    paths: list[Path | None] = [*run.checkpoints]
    paths += [None] * (len(SVO_LABELS) - len(paths))
    return Ok(dict(zip(SVO_LABELS, paths, strict=True)))


def sweep_document(columns: list[SweepColumn]) -> dict[str, object]:
    document: dict[str, object] = {}
    for column in columns:
        if column.result.is_ok():
            document[column.label] = column.result.ok.model_dump(mode="json")
        else:
            document[column.label] = {"error": str(column.result.error)}
    return document


def report_sweep(
    run: RunConfig, ctx: DisplayContext, title: str, filename: str, columns: list[SweepColumn]
) -> Result[str, CommandError]:
    seeds = {"seed0": run.seed, "episodes": evaluation_seeds(run.seed, run.merges)}
    summaries = [c.result.default_value(None) for c in columns]
    for column in columns:
        if column.result.is_error():
            warning_message(ctx, f"{column.label}: {column.result.error}")
    message = f"Sweep of {len(columns)} columns written to {run.out / filename}"
    return (
        prepare_output(run)
        .bind(lambda r: record_manifest(r, seeds))
        .bind(lambda r: write_json(r.out / filename, sweep_document(columns)))
        .bind(lambda _: show_summary_table(ctx, title, [c.label for c in columns], summaries))
        .bind(lambda _: success_message(ctx, message).map_error(display_error))
        .map(lambda _: message)
    )


def run_svo_sweep(run: RunConfig, ctx: DisplayContext) -> Result[str, CommandError]:
    return svo_columns(run).bind(
        lambda checkpoints: report_sweep(
            run,
            ctx,
            f"SVO sweep at {run.density.value} density",
            SWEEP_FILE,
            svo_sweep(checkpoints, run.density, run.merges, run.seed, run.workers),
        )
    )


def run_density_sweep(run: RunConfig, ctx: DisplayContext) -> Result[str, CommandError]:
    return require_checkpoint(run).bind(
        lambda path: report_sweep(
            run,
            ctx,
            "Density sweep",
            DENSITY_SWEEP_FILE,
            density_sweep(path, run.merges, run.seed, run.workers),
        )
    )


@handle_command_errors
def sweep(
    checkpoint: list[Path] | None = typer.Option(
        None, "--checkpoint", help="Checkpoints for φ=0, φ=π/4 and φ=π/2, in that order"
    ),
    density: str | None = typer.Option(None, "--density", help="Traffic density: easy, medium or hard"),
    merges: int | None = typer.Option(None, "--merges", help="Episodes per column"),
    seed: int | None = typer.Option(None, "--seed", help="Seed of the first episode"),
    out: Path | None = typer.Option(None, "--out", help="Output directory"),
    workers: int | None = typer.Option(None, "--workers", help="Episodes evaluated in parallel"),
    config: Path | None = typer.Option(None, "--config", help="YAML run configuration"),
) -> Result[str, CommandError]:
    """Compare individualist, prosocial and altruistic checkpoints on the same episodes."""
    flags = {
        "checkpoints": checkpoint or None,
        "density": density,
        "merges": merges,
        "seed": seed,
        "out": out,
        "workers": workers,
    }
    return resolve("sweep", flags, config).bind(lambda run: run_svo_sweep(run, default_context()))


@handle_command_errors
def density_sweep_command(
    checkpoint: Path | None = typer.Option(None, "--checkpoint", help="Checkpoint to evaluate"),
    merges: int | None = typer.Option(None, "--merges", help="Episodes per density"),
    seed: int | None = typer.Option(None, "--seed", help="Seed of the first episode"),
    out: Path | None = typer.Option(None, "--out", help="Output directory"),
    workers: int | None = typer.Option(None, "--workers", help="Episodes evaluated in parallel"),
    config: Path | None = typer.Option(None, "--config", help="YAML run configuration"),
) -> Result[str, CommandError]:
    """Evaluate one checkpoint at easy, medium and hard density."""
    flags = {
        "checkpoint": checkpoint,
        "merges": merges,
        "seed": seed,
        "out": out,
        "workers": workers,
    }
    return resolve("density-sweep", flags, config).bind(
        lambda run: run_density_sweep(run, default_context())
    )
