"""Deterministic re-simulation of one evaluation episode with its full trajectory."""

from pathlib import Path

import typer
from expression import Result

from mergelab.config import RunConfig, evaluation_scenario
from mergelab.env.merge_env import EpisodeOutcome
from mergelab.evaluation.harness import load_policy, run_episode
from mergelab.evaluation.records import record_from_outcome
from mergelab.rl.network import GreedyPolicy
from mergelab.sim.trajectory import TrajectoryRecorder
from mergelab.tui import DisplayContext, default_context, info_message, success_message
from mergelab.utils.error_handling import CommandError, handle_command_errors

from .common import (
    checkpoint_error,
    display_error,
    prepare_output,
    record_manifest,
    require_checkpoint,
    resolve,
    write_json,
    write_text,
)

TRAJECTORY_FILE = "trajectory.csv"
EPISODE_FILE = "episode.json"


def replay_episode(
    policy: GreedyPolicy, run: RunConfig
) -> tuple[EpisodeOutcome, TrajectoryRecorder]:
    recorder = TrajectoryRecorder()
    scenario = evaluation_scenario(run.density, run.svo_phi, run.seed)
    return run_episode(policy, scenario, run.seed, recorder), recorder


def episode_document(outcome: EpisodeOutcome, seed: int) -> dict[str, object]:
    record = record_from_outcome(outcome, seed)
    return {
        "ego_id": outcome.ego_id,
        "outcome": outcome.terminal.value,
        "start_clock": outcome.start_clock,
        "merge_clock": outcome.merge_clock,
        "end_clock": outcome.end_clock,
        "steps": outcome.steps,
        "total_reward": outcome.total_reward,
        "record": record.model_dump(mode="json"),
    }


def run_replay(run: RunConfig, ctx: DisplayContext) -> Result[str, CommandError]:
    def write(loaded: tuple[GreedyPolicy, float]) -> Result[str, CommandError]:
        policy, phi = loaded
        resolved = run.model_copy(update={"svo_phi": phi})
        outcome, recorder = replay_episode(policy, resolved)
        message = f"Episode {run.seed} ended {outcome.terminal.value}; ego is vehicle {outcome.ego_id}"
        return (
            prepare_output(resolved)
            .bind(lambda r: record_manifest(r, {"episode": r.seed}))
            .bind(lambda r: write_text(r.out / TRAJECTORY_FILE, recorder.to_csv()))
            .bind(lambda _: write_json(run.out / EPISODE_FILE, episode_document(outcome, run.seed)))
            .bind(lambda _: info_message(ctx, message).map_error(display_error))
            .bind(
                lambda _: success_message(
                    ctx, f"Trajectory written to {run.out / TRAJECTORY_FILE}"
                ).map_error(display_error)
            )
            .map(lambda _: message)
        )

    return (
        require_checkpoint(run)
        .bind(lambda path: load_policy(path).map_error(checkpoint_error))
        .bind(write)
    )


@handle_command_errors
def replay(
    checkpoint: Path | None = typer.Option(None, "--checkpoint", help="Checkpoint driving the ego"),
    seed: int | None = typer.Option(None, "--seed", help="Episode seed, as listed in merges.csv"),
    density: str | None = typer.Option(None, "--density", help="Traffic density: easy, medium or hard"),
    out: Path | None = typer.Option(None, "--out", help="Output directory"),
    config: Path | None = typer.Option(None, "--config", help="YAML run configuration"),
) -> Result[str, CommandError]:
    """Re-simulate one episode and write its trajectory CSV."""
    flags = {"checkpoint": checkpoint, "seed": seed, "density": density, "out": out}
    return resolve("replay", flags, config).bind(lambda run: run_replay(run, default_context()))
