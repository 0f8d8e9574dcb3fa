"""PPO training loop: rollout collection, updates, periodic evaluation and the training log."""

import csv
import io
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter

from .buffer import RolloutBuffer
from .network import GreedyPolicy, PolicyNetwork
from .optim import Adam
from .ppo import LossStats, PPOConfig, ppo_update
from .vec_env import VectorEnv

TRAINING_LOG_FORMAT_VERSION = 1
CURVE_COLUMNS = ("timestep", "mean_episode_reward", "eval_collision_pct")


class UpdateRecord(BaseModel):
    kind: Literal["update"] = "update"
    timestep: int
    update: int
    episodes: int
    mean_episode_reward: float | None
    collisions: int
    loss: float
    value_loss: float
    policy_objective: float | None = None
    entropy: float | None = None
    approx_kl: float | None = None
    clip_fraction: float | None = None

    model_config = ConfigDict(frozen=True)


class EvalRecord(BaseModel):
    kind: Literal["eval"] = "eval"
    timestep: int
    episodes: int
    mean_episode_reward: float
    eval_collision_pct: float

    model_config = ConfigDict(frozen=True)


TrainingRecord = Annotated[UpdateRecord | EvalRecord, Field(discriminator="kind")]
_record_adapter: TypeAdapter[UpdateRecord | EvalRecord] = TypeAdapter(TrainingRecord)


def parse_record(line: str) -> UpdateRecord | EvalRecord:
    return _record_adapter.validate_json(line)


@dataclass(frozen=True)
class EvalPoint:
    mean_reward: float
    collision_pct: float
    episodes: int


EvalHook = Callable[[GreedyPolicy, int], EvalPoint]
RecordSink = Callable[[UpdateRecord | EvalRecord], None]


@dataclass
class TrainerState:
    net: PolicyNetwork
    optimizer: Adam
    rng: np.random.Generator
    timestep: int = 0
    updates: int = 0
    episodes: int = 0


def init_trainer(
    cfg: PPOConfig, init_seed: int, learner_seed: int, obs_dim: int = 14, n_actions: int = 14
) -> TrainerState:
    """Fresh network and optimizer; the learner generator drives action sampling and shuffling."""
    net = PolicyNetwork.initialize(np.random.default_rng(init_seed), obs_dim, n_actions, cfg.hidden)
    return TrainerState(net, Adam(cfg.learning_rate), np.random.default_rng(learner_seed))


def planned_updates(cfg: PPOConfig) -> int:
    return math.ceil(cfg.total_timesteps / cfg.batch_size)


def crossed_multiple(before: int, after: int, every: int) -> bool:
    return after // every > before // every


def train(
    vec_env: VectorEnv,
    cfg: PPOConfig,
    state: TrainerState,
    eval_hook: EvalHook | None = None,
    eval_every: int = 100_000,
    on_record: RecordSink | None = None,
    on_checkpoint: Callable[[TrainerState], None] | None = None,
    checkpoint_every: int | None = None,
    on_progress: Callable[[int], None] | None = None,
) -> TrainerState:
    """Alternate rollouts of cfg.horizon steps per env with PPO updates up to cfg.total_timesteps."""
    emit = on_record or (lambda _: None)
    obs = vec_env.reset()
    buffer = RolloutBuffer(cfg.horizon, vec_env.n_envs, state.net.obs_dim)

    while state.timestep < cfg.total_timesteps:
        start = state.timestep
        buffer.reset()
        returns: list[float] = []
        collisions = 0
        for _ in range(cfg.horizon):
            actions, logp, values = state.net.sample(obs, state.rng)
            step = vec_env.step(actions)
            buffer.add(obs, actions, logp, step.rewards, values, step.dones)
            for outcome in step.outcomes:
                if outcome is not None:
                    returns.append(outcome.total_reward)
                    collisions += outcome.crashed
            obs = step.obs
            state.timestep += vec_env.n_envs

        buffer.finish(state.net.forward(obs).values, cfg.gamma, cfg.gae_lambda)
        stats: LossStats = ppo_update(state.net, state.optimizer, buffer.flatten(), cfg, state.rng)
        state.updates += 1
        state.episodes += len(returns)
        emit(
            UpdateRecord(
                timestep=state.timestep,
                update=state.updates,
                episodes=len(returns),
                mean_episode_reward=float(np.mean(returns)) if returns else None,
                collisions=collisions,
                **vars(stats),
            )
        )
        if eval_hook is not None and crossed_multiple(start, state.timestep, eval_every):
            point = eval_hook(state.net, state.timestep)
            emit(
                EvalRecord(
                    timestep=state.timestep,
                    episodes=point.episodes,
                    mean_episode_reward=point.mean_reward,
                    eval_collision_pct=point.collision_pct,
                )
            )
        if on_checkpoint is not None and checkpoint_every and crossed_multiple(
            start, state.timestep, checkpoint_every
        ):
            on_checkpoint(state)
        if on_progress is not None:
            on_progress(state.timestep)

    if on_checkpoint is not None:
        on_checkpoint(state)
    return state


def training_curve_csv(records: list[UpdateRecord | EvalRecord]) -> str:
    """Plot data from the evaluation records of a training log."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CURVE_COLUMNS)
    for r in records:
        if isinstance(r, EvalRecord):
            writer.writerow([r.timestep, repr(r.mean_episode_reward), repr(r.eval_collision_pct)])
    return buffer.getvalue()
