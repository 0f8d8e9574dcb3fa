"""PPO training command: checkpoints, JSONL log, training curve and resume."""

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
from mergelab.evaluation.harness import periodic_evaluation
from mergelab.rl.checkpoint import (
    CheckpointDocument,
    load_checkpoint,
    make_checkpoint,
    optimizer_from_doc,
    params_from_doc,
    restore_rng,
)
from mergelab.rl.network import PolicyNetwork
from mergelab.rl.ppo import PPOConfig
from mergelab.rl.trainer import TrainerState, init_trainer, train as ppo_train
from mergelab.rl.vec_env import EnvFactory, make_vec_env
from mergelab.tui import DisplayContext, default_context, success_message, timestep_progress
from mergelab.utils.error_handling import CommandError, handle_command_errors

from .common import (
    LATEST_CHECKPOINT,
    TRAINING_LOG,
    checkpoint_error,
    display_error,
    log_sink,
    prepare_output,
    record_manifest,
    resolve,
    start_log,
    store_checkpoint,
    write_training_curve,
)


def ppo_config(run: RunConfig) -> PPOConfig:
    return PPOConfig(n_envs=run.n_envs, total_timesteps=run.total_timesteps, horizon=run.horizon)


def _restore(doc: CheckpointDocument, cfg: PPOConfig) -> TrainerState:
    return TrainerState(
        net=PolicyNetwork(params_from_doc(doc.params), tuple(doc.hidden)),
        optimizer=optimizer_from_doc(doc.optimizer),
        rng=restore_rng(doc),
        timestep=doc.timestep,
        updates=doc.timestep // cfg.batch_size,
        episodes=doc.episodes,
    )


def resume_trainer(run: RunConfig, cfg: PPOConfig) -> Result[TrainerState, CommandError]:
    path = run.out / LATEST_CHECKPOINT
    if not path.exists():
        return Error(CommandError("missing_checkpoint", f"nothing to resume: {path} does not exist"))
    return load_checkpoint(path, "ppo").map_error(checkpoint_error).map(lambda doc: _restore(doc, cfg))


def fresh_or_resumed(
    run: RunConfig, cfg: PPOConfig, seeds: TrainingSeeds
) -> Result[TrainerState, CommandError]:
    if run.resume:
        return resume_trainer(run, cfg)
    return Ok(init_trainer(cfg, seeds.init, seeds.shuffle))


def _train(
    run: RunConfig,
    cfg: PPOConfig,
    seeds: TrainingSeeds,
    state: TrainerState,
    ctx: DisplayContext,
    show_progress: bool,
) -> TrainerState:
    def on_checkpoint(s: TrainerState) -> None:
        doc = make_checkpoint(
            "ppo", s.net, s.optimizer, s.timestep, s.rng, run.svo_phi, cfg, episodes=s.episodes
        )
        store_checkpoint(run.out, doc)

    scenario = scenario_for(run)
    vec_env = make_vec_env(EnvFactory(scenario), seeds.env_seeds_at(state.timestep), run.backend)
    try:
        with timestep_progress("PPO", run.total_timesteps, ctx.console, show_progress) as progress:
            progress.update(state.timestep)
            return ppo_train(
                vec_env,
                cfg,
                state,
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
    finally:
        vec_env.close()


def _report(ctx: DisplayContext, run: RunConfig, state: TrainerState) -> Result[str, CommandError]:
    message = f"Trained {state.timestep} timesteps over {state.episodes} episodes into {run.out}"
    return success_message(ctx, message).map_error(display_error).map(lambda _: message)


def run_training(
    run: RunConfig, ctx: DisplayContext, show_progress: bool = True
) -> Result[str, CommandError]:
    cfg = ppo_config(run)
    seeds = split_seeds(run.seed, run.n_envs)
    return (
        prepare_output(run)
        .bind(lambda r: record_manifest(r, seeds.model_dump()))
        .bind(lambda r: fresh_or_resumed(r, cfg, seeds))
        .bind(lambda s: start_log(run.out / TRAINING_LOG, s.timestep).map(lambda _: s))
        .map(lambda s: _train(run, cfg, seeds, s, ctx, show_progress))
        .bind(lambda s: write_training_curve(run.out).map(lambda _: s))
        .bind(lambda s: _report(ctx, run, s))
    )


@handle_command_errors
def train(
    svo: float | None = typer.Option(None, "--svo", help="SVO angle φ in radians, within [0, π/2]"),
    steps: int | None = typer.Option(None, "--steps", help="Total environment timesteps"),
    envs: int | None = typer.Option(None, "--envs", help="Parallel training environments"),
    seed: int | None = typer.Option(None, "--seed", help="Master seed"),
    out: Path | None = typer.Option(None, "--out", help="Output directory"),
    resume: bool = typer.Option(False, "--resume", help="Continue from the latest checkpoint in --out"),
    backend: str | None = typer.Option(None, "--backend", help="Rollout backend: sequential or process"),
    workers: int | None = typer.Option(None, "--workers", help="Processes for periodic evaluation"),
    config: Path | None = typer.Option(None, "--config", help="YAML run configuration"),
    quiet: bool = typer.Option(False, "--quiet", help="Hide the progress bar"),
) -> Result[str, CommandError]:
    """Train a PPO merging policy."""
    flags = {
        "svo_phi": svo,
        "total_timesteps": steps,
        "n_envs": envs,
        "seed": seed,
        "out": out,
        "resume": resume or None,
        "backend": backend,
        "workers": workers,
    }
    return resolve("train", flags, config).bind(
        lambda run: run_training(run, default_context(), show_progress=not quiet)
    )
