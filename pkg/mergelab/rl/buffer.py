"""Rollout storage and generalized advantage estimation."""

from dataclasses import dataclass

import numpy as np


def compute_gae(
    rewards: np.ndarray,
    values: np.ndarray,
    dones: np.ndarray,
    last_values: np.ndarray,
    gamma: float,
    gae_lambda: float,
) -> tuple[np.ndarray, np.ndarray]:
    """(advantages, returns) for arrays indexed [step, ...].

    ``dones[t]`` marks that the episode ended after step t, so nothing is bootstrapped
    across it; ``last_values`` are the value estimates of the states after the last step.
    """
    advantages = np.zeros_like(rewards, dtype=np.float64)
    next_advantage = np.zeros_like(last_values, dtype=np.float64)
    next_value = last_values
    for t in reversed(range(len(rewards))):
        live = 1.0 - dones[t]
        delta = rewards[t] + gamma * next_value * live - values[t]
        next_advantage = delta + gamma * gae_lambda * live * next_advantage
        advantages[t] = next_advantage
        next_value = values[t]
    return advantages, advantages + values


@dataclass(frozen=True)
class Batch:
    obs: np.ndarray
    actions: np.ndarray
    old_logp: np.ndarray
    advantages: np.ndarray
    returns: np.ndarray
    old_values: np.ndarray

    def __len__(self) -> int:
        return len(self.actions)

    def take(self, index: np.ndarray) -> "Batch":
        return Batch(
            self.obs[index],
            self.actions[index],
            self.old_logp[index],
            self.advantages[index],
            self.returns[index],
            self.old_values[index],
        )


class RolloutBuffer:
    """Fixed-size storage for horizon steps of n_envs environments."""

    def __init__(self, horizon: int, n_envs: int, obs_dim: int) -> None:
        self.horizon = horizon
        self.n_envs = n_envs
        self.obs = np.zeros((horizon, n_envs, obs_dim))
        self.actions = np.zeros((horizon, n_envs), dtype=np.int64)
        self.logp = np.zeros((horizon, n_envs))
        self.rewards = np.zeros((horizon, n_envs))
        self.values = np.zeros((horizon, n_envs))
        self.dones = np.zeros((horizon, n_envs))
        self.advantages = np.zeros((horizon, n_envs))
        self.returns = np.zeros((horizon, n_envs))
        self.pos = 0

    @property
    def full(self) -> bool:
        return self.pos == self.horizon

    def add(
        self,
        obs: np.ndarray,
        actions: np.ndarray,
        logp: np.ndarray,
        rewards: np.ndarray,
        values: np.ndarray,
        dones: np.ndarray,
    ) -> None:
        t = self.pos
        self.obs[t], self.actions[t], self.logp[t] = obs, actions, logp
        self.rewards[t], self.values[t], self.dones[t] = rewards, values, dones
        self.pos += 1

    def finish(self, last_values: np.ndarray, gamma: float, gae_lambda: float) -> None:
        self.advantages, self.returns = compute_gae(
            self.rewards, self.values, self.dones, last_values, gamma, gae_lambda
        )

    def reset(self) -> None:
        self.pos = 0

    def flatten(self) -> Batch:
        """All samples ordered by environment index, then step index."""

        def flat(a: np.ndarray) -> np.ndarray:
            return np.swapaxes(a, 0, 1).reshape(self.horizon * self.n_envs, *a.shape[2:])

        return Batch(
            flat(self.obs),
            flat(self.actions),
            flat(self.logp),
            flat(self.advantages),
            flat(self.returns),
            flat(self.values),
        )
