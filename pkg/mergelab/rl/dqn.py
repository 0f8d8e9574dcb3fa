"""Deep Q-learning baseline over the same action space, with replay and a target network."""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from mergelab.env.merge_env import MergeEnv
from mergelab.utils.error_handling import RolloutError, TrainingDivergence

from .network import Params, QNetwork
from .optim import Adam, clip_by_global_norm
from .trainer import EvalHook, EvalRecord, RecordSink, UpdateRecord, crossed_multiple


class DQNConfig(BaseModel):
    learning_rate: float = Field(default=1e-4, gt=0.0)
    buffer_size: int = Field(default=100_000, ge=1)
    batch_size: int = Field(default=64, ge=1)
    gamma: float = Field(default=0.99, ge=0.0, le=1.0)
    target_update_interval: int = Field(default=10_000, ge=1)
    exploration_fraction: float = Field(default=0.1, gt=0.0, le=1.0)
    epsilon_start: float = Field(default=1.0, ge=0.0, le=1.0)
    epsilon_end: float = Field(default=0.05, ge=0.0, le=1.0)
    train_frequency: int = Field(default=4, ge=1)
    learning_starts: int = Field(default=1_000, ge=0)
    max_grad_norm: float = Field(default=10.0, gt=0.0)
    log_interval: int = Field(default=10_000, ge=1)
    total_timesteps: int = Field(default=15_000_000, ge=1)
    hidden: tuple[int, ...] = (64, 64)

    model_config = ConfigDict(frozen=True)


def epsilon_at(timestep: int, cfg: DQNConfig) -> float:
    """Linear annealing over the first exploration_fraction of training, then constant."""
    horizon = cfg.exploration_fraction * cfg.total_timesteps
    progress = min(timestep / horizon, 1.0)
    return cfg.epsilon_start + progress * (cfg.epsilon_end - cfg.epsilon_start)


class ReplayBuffer:
    """Ring buffer of transitions."""

    def __init__(self, capacity: int, obs_dim: int) -> None:
        self.capacity = capacity
        self.obs = np.zeros((capacity, obs_dim))
        self.next_obs = np.zeros((capacity, obs_dim))
        self.actions = np.zeros(capacity, dtype=np.int64)
        self.rewards = np.zeros(capacity)
        self.dones = np.zeros(capacity)
        self.pos = 0
        self.size = 0

    def __len__(self) -> int:
        return self.size

    def add(self, obs: np.ndarray, action: int, reward: float, next_obs: np.ndarray, done: bool) -> None:
        i = self.pos
        self.obs[i], self.actions[i], self.rewards[i] = obs, action, reward
        self.next_obs[i], self.dones[i] = next_obs, float(done)
        self.pos = (self.pos + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, n: int, rng: np.random.Generator) -> tuple[np.ndarray, ...]:
        idx = rng.integers(0, self.size, size=n)
        return self.obs[idx], self.actions[idx], self.rewards[idx], self.next_obs[idx], self.dones[idx]


def td_targets(
    target: QNetwork, rewards: np.ndarray, next_obs: np.ndarray, dones: np.ndarray, gamma: float
) -> np.ndarray:
    return rewards + gamma * target.q_values(next_obs).max(axis=1) * (1.0 - dones)


def huber_loss_and_grads(
    net: QNetwork, obs: np.ndarray, actions: np.ndarray, targets: np.ndarray
) -> tuple[float, Params]:
    q, features, cache = net.forward(obs)
    rows = np.arange(len(actions))
    err = q[rows, actions] - targets
    absolute = np.abs(err)
    loss = float(np.mean(np.where(absolute <= 1.0, 0.5 * err**2, absolute - 0.5)))
    if not np.isfinite(loss):
        raise TrainingDivergence("non-finite DQN loss", {"loss": loss})
    dq = np.zeros_like(q)
    dq[rows, actions] = np.clip(err, -1.0, 1.0) / len(actions)
    return loss, net.backward(features, cache, dq)


@dataclass
class DQNState:
    net: QNetwork
    target: QNetwork
    optimizer: Adam
    rng: np.random.Generator
    timestep: int = 0
    episodes: int = 0


def init_dqn(
    cfg: DQNConfig, init_seed: int, learner_seed: int, obs_dim: int = 14, n_actions: int = 14
) -> DQNState:
    net = QNetwork.initialize(np.random.default_rng(init_seed), obs_dim, n_actions, cfg.hidden)
    return DQNState(net, net.copy(), Adam(cfg.learning_rate), np.random.default_rng(learner_seed))


def dqn_train(
    env: MergeEnv,
    cfg: DQNConfig,
    state: DQNState,
    env_seed: int,
    eval_hook: EvalHook | None = None,
    eval_every: int = 100_000,
    on_record: RecordSink | None = None,
    on_checkpoint: Callable[[DQNState], None] | None = None,
    checkpoint_every: int | None = None,
    on_progress: Callable[[int], None] | None = None,
) -> DQNState:
    emit = on_record or (lambda _: None)
    replay = ReplayBuffer(cfg.buffer_size, state.net.obs_dim)
    obs, _ = env.reset(seed=env_seed)
    returns: list[float] = []
    losses: list[float] = []
    collisions = 0

    while state.timestep < cfg.total_timesteps:
        before = state.timestep
        if state.rng.random() < epsilon_at(state.timestep, cfg):
            action = int(state.rng.integers(state.net.n_actions))
        else:
            action = state.net.greedy(obs)
        try:
            next_obs, reward, terminated, truncated, info = env.step(action)
        except Exception as e:
            raise RolloutError(0, state.timestep, e) from e
        # truncation is not bootstrapped either
        done = terminated or truncated
        replay.add(obs, action, reward, next_obs, done)
        obs = next_obs
        state.timestep += 1
        if done:
            outcome = info["outcome"]
            returns.append(outcome.total_reward)
            collisions += outcome.crashed
            state.episodes += 1
            obs, _ = env.reset()

        if state.timestep > cfg.learning_starts and state.timestep % cfg.train_frequency == 0:
            o, a, r, o2, d = replay.sample(cfg.batch_size, state.rng)
            loss, grads = huber_loss_and_grads(state.net, o, a, td_targets(state.target, r, o2, d, cfg.gamma))
            grads, _ = clip_by_global_norm(grads, cfg.max_grad_norm)
            state.optimizer.step(state.net.params, grads)
            losses.append(loss)
        if state.timestep % cfg.target_update_interval == 0:
            state.target = state.net.copy()

        if state.timestep % cfg.log_interval == 0:
            mean_loss = float(np.mean(losses)) if losses else 0.0
            emit(
                UpdateRecord(
                    timestep=state.timestep,
                    update=state.timestep // cfg.log_interval,
                    episodes=len(returns),
                    mean_episode_reward=float(np.mean(returns)) if returns else None,
                    collisions=collisions,
                    loss=mean_loss,
                    value_loss=mean_loss,
                )
            )
            returns, losses, collisions = [], [], 0
        if eval_hook is not None and crossed_multiple(before, state.timestep, eval_every):
            point = eval_hook(state.net, state.timestep)
            emit(
                EvalRecord(
                    timestep=state.timestep,
                    episodes=point.episodes,
                    mean_episode_reward=point.mean_reward,
                    eval_collision_pct=point.collision_pct,
                )
            )
        if (
            on_checkpoint is not None
            and checkpoint_every
            and crossed_multiple(before, state.timestep, checkpoint_every)
        ):
            on_checkpoint(state)
        if on_progress is not None and state.timestep % 1000 == 0:
            on_progress(state.timestep)

    if on_checkpoint is not None:
        on_checkpoint(state)
    return state
