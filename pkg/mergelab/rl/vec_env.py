"""Batched stepping of independent merge environments, in-process or one process per env.

Finished episodes are reset immediately; the observation returned for such an env is the
first observation of its next episode and the finished EpisodeOutcome is reported alongside.
"""

import multiprocessing
from collections.abc import Sequence
from dataclasses import dataclass
from multiprocessing.connection import Connection
from typing import Any, Protocol

import numpy as np

from mergelab.config import ScenarioConfig
from mergelab.env.merge_env import EpisodeOutcome, MergeEnv
from mergelab.env.reward import RewardConfig
from mergelab.utils.error_handling import RolloutError


@dataclass(frozen=True)
class EnvFactory:
    """Picklable recipe for one environment."""

    scenario: ScenarioConfig
    reward_config: RewardConfig | None = None

    def __call__(self) -> MergeEnv:
        return MergeEnv(self.scenario, self.reward_config)


@dataclass(frozen=True)
class VecStep:
    obs: np.ndarray
    rewards: np.ndarray
    terminated: np.ndarray
    truncated: np.ndarray
    outcomes: list[EpisodeOutcome | None]

    @property
    def dones(self) -> np.ndarray:
        return np.logical_or(self.terminated, self.truncated)


class VectorEnv(Protocol):
    n_envs: int

    def reset(self) -> np.ndarray: ...

    def step(self, actions: np.ndarray) -> VecStep: ...

    def close(self) -> None: ...


def _step_and_reset(env: MergeEnv, action: int) -> tuple[np.ndarray, float, bool, bool, Any]:
    obs, reward, terminated, truncated, info = env.step(int(action))
    outcome = info.get("outcome")
    if terminated or truncated:
        obs, _ = env.reset()
    return obs, reward, terminated, truncated, outcome


def _collect(results: Sequence[tuple[np.ndarray, float, bool, bool, Any]]) -> VecStep:
    return VecStep(
        obs=np.stack([r[0] for r in results]),
        rewards=np.array([r[1] for r in results], dtype=np.float64),
        terminated=np.array([r[2] for r in results]),
        truncated=np.array([r[3] for r in results]),
        outcomes=[r[4] for r in results],
    )


class SequentialVecEnv:
    def __init__(self, factory: EnvFactory, seeds: Sequence[int]) -> None:
        self.envs = [factory() for _ in seeds]
        self.seeds = list(seeds)
        self.n_envs = len(self.envs)
        self.steps = 0

    def reset(self) -> np.ndarray:
        obs = []
        for i, (env, seed) in enumerate(zip(self.envs, self.seeds, strict=True)):
            try:
                obs.append(env.reset(seed=seed)[0])
            except Exception as e:
                raise RolloutError(i, self.steps, e) from e
        return np.stack(obs)

    def step(self, actions: np.ndarray) -> VecStep:
        results = []
        for i, env in enumerate(self.envs):
            try:
                results.append(_step_and_reset(env, actions[i]))
            except Exception as e:
                raise RolloutError(i, self.steps, e) from e
        self.steps += 1
        return _collect(results)

    def close(self) -> None:
        self.envs.clear()


def _worker(remote: Connection, factory: EnvFactory) -> None:
    env = factory()
    try:
        while True:
            command, payload = remote.recv()
            try:
                match command:
                    case "reset":
                        remote.send(("ok", env.reset(seed=payload)[0]))
                    case "step":
                        remote.send(("ok", _step_and_reset(env, payload)))
                    case "close":
                        remote.send(("ok", None))
                        return
            except Exception as e:
                remote.send(("error", f"{type(e).__name__}: {e}"))
    finally:
        remote.close()


class ProcessVecEnv:
    """One worker process per environment, driven over pipes in env-index order."""

    def __init__(self, factory: EnvFactory, seeds: Sequence[int]) -> None:
        ctx = multiprocessing.get_context("spawn")
        self.seeds = list(seeds)
        self.n_envs = len(self.seeds)
        self.steps = 0
        self.remotes: list[Connection] = []
        self.processes = []
        for _ in self.seeds:
            parent, child = ctx.Pipe()
            process = ctx.Process(target=_worker, args=(child, factory), daemon=True)
            process.start()
            child.close()
            self.remotes.append(parent)
            self.processes.append(process)

    def _gather(self) -> list[Any]:
        replies = []
        for i, remote in enumerate(self.remotes):
            status, payload = remote.recv()
            if status == "error":
                raise RolloutError(i, self.steps, RuntimeError(payload))
            replies.append(payload)
        return replies

    def reset(self) -> np.ndarray:
        for remote, seed in zip(self.remotes, self.seeds, strict=True):
            remote.send(("reset", seed))
        return np.stack(self._gather())

    def step(self, actions: np.ndarray) -> VecStep:
        for remote, action in zip(self.remotes, actions, strict=True):
            remote.send(("step", int(action)))
        results = self._gather()
        self.steps += 1
        return _collect(results)

    def close(self) -> None:
        for remote in self.remotes:
            try:
                remote.send(("close", None))
                remote.recv()
            except (BrokenPipeError, EOFError):
                pass
        for process in self.processes:
            process.join(timeout=5)
        self.remotes.clear()
        self.processes.clear()


def make_vec_env(factory: EnvFactory, seeds: Sequence[int], backend: str = "sequential") -> VectorEnv:
    match backend:
        case "sequential":
            return SequentialVecEnv(factory, seeds)
        case "process":
            return ProcessVecEnv(factory, seeds)
        case _:
            raise ValueError(f"unknown rollout backend: {backend}")
