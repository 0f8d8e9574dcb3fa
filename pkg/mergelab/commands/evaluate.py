"""Greedy evaluation of one checkpoint at one density preset."""

from pathlib import Path

import typer
from expression import Result

from mergelab.config import RunConfig, evaluation_seeds
from mergelab.evaluation.harness import EvaluationResult, load_policy, run_evaluation
from mergelab.evaluation.records import records_to_csv
from mergelab.rl.network import GreedyPolicy
from mergelab.tui import DisplayContext, default_context, success_message
from mergelab.utils.error_handling import CommandError, handle_command_errors

from .common import (
    checkpoint_error,
    display_error,
    prepare_output,
    record_manifest,
    require_checkpoint,
    resolve,
    show_summary_table,
    write_json,
    write_text,
)

SUMMARY_FILE = "summary.json"
MERGES_FILE = "merges.csv"


def _evaluate(run: RunConfig) -> Result[tuple[RunConfig, EvaluationResult], CommandError]:
    def execute(loaded: tuple[GreedyPolicy, float]) -> tuple[RunConfig, EvaluationResult]:
        policy, phi = loaded
        resolved = run.model_copy(update={"svo_phi": phi})
        return resolved, run_evaluation(policy, run.density, run.merges, run.seed, phi, run.workers)

    return (
        require_checkpoint(run)
        .bind(lambda path: load_policy(path).map_error(checkpoint_error))
        .map(execute)
    )


def _write(run: RunConfig, result: EvaluationResult) -> Result[RunConfig, CommandError]:
    seeds = {"seed0": run.seed, "episodes": evaluation_seeds(run.seed, run.merges)}
    return (
        prepare_output(run)
        .bind(lambda r: record_manifest(r, seeds))
        .bind(lambda r: write_json(r.out / SUMMARY_FILE, result.summary.model_dump(mode="json")))
        .bind(lambda _: write_text(run.out / MERGES_FILE, records_to_csv(result.records)))
        .map(lambda _: run)
    )


def run_eval(run: RunConfig, ctx: DisplayContext) -> Result[str, CommandError]:
    def finish(resolved: RunConfig, result: EvaluationResult) -> Result[str, CommandError]:
        message = f"Evaluated {result.summary.n_episodes} episodes into {resolved.out}"
        return (
            _write(resolved, result)
            .bind(
                lambda r: show_summary_table(
                    ctx, f"Evaluation at {r.density.value} density", [r.density.value], [result.summary]
                )
            )
            .bind(lambda _: success_message(ctx, message).map_error(display_error))
            .map(lambda _: message)
        )

    return _evaluate(run).bind(lambda pair: finish(*pair))


@handle_command_errors
def evaluate(
    checkpoint: Path | None = typer.Option(None, "--checkpoint", help="Checkpoint to evaluate"),
    density: str | None = typer.Option(None, "--density", help="Traffic density: easy, medium or hard"),
    merges: int | None = typer.Option(None, "--merges", help="Number of evaluation episodes"),
    seed: int | None = typer.Option(None, "--seed", help="Seed of the first episode"),
    out: Path | None = typer.Option(None, "--out", help="Output directory"),
    workers: int | None = typer.Option(None, "--workers", help="Episodes evaluated in parallel"),
    config: Path | None = typer.Option(None, "--config", help="YAML run configuration"),
) -> Result[str, CommandError]:
    """Evaluate a checkpoint greedily and write summary.json and merges.csv."""
    flags = {
        "checkpoint": checkpoint,
        "density": density,
        "merges": merges,
        "seed": seed,
        "out": out,
        "workers": workers,
    }
    return resolve("eval", flags, config).bind(lambda run: run_eval(run, default_context()))
