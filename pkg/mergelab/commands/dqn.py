"""DQN baseline training command; writes the same log and curve formats as PPO."""

from pathlib import Path

import typer
from expression import Error, Ok, Result

from mergelab.config import (
    RunConfig,
    TrainingSeeds,
    scenario_for,
    split_seeds,
    training_evaluation_scenario,
)
from mergelab.env.merge_env import MergeEnv
from mergelab.evaluation.harness import periodic_evaluation
from mergelab.rl.checkpoint import make_checkpoint
from mergelab.rl.dqn import DQNConfig, DQNState, dqn_train, init_dqn
from mergelab.tui import DisplayContext, default_context, success_message, timestep_progress
from mergelab.utils.error_handling import CommandError, handle_command_errors

from .common import (
    TRAINING_LOG,
    display_error,
    log_sink,
    prepare_output,
    record_manifest,
    resolve,
    start_log,
    store_checkpoint,
    write_training_curve,
)


def _no_resume(run: RunConfig) -> Result[RunConfig, CommandError]:
    if run.resume:
        return Error(
            CommandError("unsupported", "dqn runs cannot resume: the replay buffer is not checkpointed")
        )
    return Ok(run)


def _train(
    run: RunConfig, cfg: DQNConfig, seeds: TrainingSeeds, ctx: DisplayContext, show_progress: bool
) -> DQNState:
    def on_checkpoint(s: DQNState) -> None:
        doc = make_checkpoint(
            "dqn",
            s.net,
            s.optimizer,
            s.timestep,
            s.rng,
            run.svo_phi,
            cfg,
            target=s.target,
            episodes=s.episodes,
        )
        store_checkpoint(run.out, doc)

    scenario = scenario_for(run)
    with timestep_progress("DQN", run.total_timesteps, ctx.console, show_progress) as progress:
        return dqn_train(
            MergeEnv(scenario),
            cfg,
            init_dqn(cfg, seeds.init, seeds.shuffle),
            seeds.envs[0],
            eval_hook=periodic_evaluation(
                training_evaluation_scenario(scenario),
                run.eval_episodes,
                seeds.evaluation_seed0,
                run.workers,
            ),
            eval_every=run.eval_every,
            on_record=log_sink(run.out / TRAINING_LOG),
            on_checkpoint=on_checkpoint,
            checkpoint_every=run.checkpoint_every,
            on_progress=progress.update,
        )


def run_dqn(run: RunConfig, ctx: DisplayContext, show_progress: bool = True) -> Result[str, CommandError]:
    cfg = DQNConfig(total_timesteps=run.total_timesteps)
    seeds = split_seeds(run.seed, 1)
    return (
        _no_resume(run)
        .bind(prepare_output)
        .bind(lambda r: record_manifest(r, seeds.model_dump()))
        .bind(lambda r: start_log(r.out / TRAINING_LOG, 0))
        .map(lambda _: _train(run, cfg, seeds, ctx, show_progress))
        .bind(lambda s: write_training_curve(run.out).map(lambda _: s))
        .bind(
            lambda s: success_message(
                ctx, f"DQN trained {s.timestep} timesteps over {s.episodes} episodes into {run.out}"
            ).map_error(display_error)
        )
        .map(lambda _: f"DQN run written to {run.out}")
    )


@handle_command_errors
def dqn(
    svo: float | None = typer.Option(None, "--svo", help="SVO angle φ in radians, within [0, π/2]"),
    steps: int | None = typer.Option(None, "--steps", help="Total environment timesteps"),
    seed: int | None = typer.Option(None, "--seed", help="Master seed"),
    out: Path | None = typer.Option(None, "--out", help="Output directory"),
    workers: int | None = typer.Option(None, "--workers", help="Processes for periodic evaluation"),
    config: Path | None = typer.Option(None, "--config", help="YAML run configuration"),
    quiet: bool = typer.Option(False, "--quiet", help="Hide the progress bar"),
) -> Result[str, CommandError]:
    """Train the DQN baseline on the same merge task."""
    flags = {
        "svo_phi": svo,
        "total_timesteps": steps,
        "seed": seed,
        "out": out,
        "workers": workers,
    }
    return resolve("dqn", flags, config).bind(
        lambda run: run_dqn(run, default_context(), show_progress=not quiet)
    )
