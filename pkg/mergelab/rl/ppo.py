"""Clipped-surrogate PPO loss, its analytic gradient, and the minibatch update."""

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from mergelab.utils.error_handling import TrainingDivergence

from .buffer import Batch
from .network import Params, PolicyNetwork, log_softmax
from .optim import Adam, clip_by_global_norm


class PPOConfig(BaseModel):
    learning_rate: float = Field(default=3e-4, gt=0.0)
    horizon: int = Field(default=2048, ge=1)
    minibatch_size: int = Field(default=64, ge=1)
    epochs: int = Field(default=10, ge=1)
    gamma: float = Field(default=0.99, ge=0.0, le=1.0)
    clip_epsilon: float = Field(default=0.2, gt=0.0)
    value_coef: float = Field(default=0.5, ge=0.0)
    entropy_coef: float = Field(default=0.0, ge=0.0)
    gae_lambda: float = Field(default=0.95, ge=0.0, le=1.0)
    n_envs: int = Field(default=20, ge=1)
    total_timesteps: int = Field(default=15_000_000, ge=1)
    max_grad_norm: float = Field(default=0.5, gt=0.0)
    hidden: tuple[int, ...] = (64, 64)

    model_config = ConfigDict(frozen=True)

    @property
    def batch_size(self) -> int:
        return self.horizon * self.n_envs


@dataclass(frozen=True)
class LossStats:
    loss: float
    policy_objective: float
    value_loss: float
    entropy: float
    approx_kl: float
    clip_fraction: float


def normalize_advantages(advantages: np.ndarray) -> np.ndarray:
    return (advantages - advantages.mean()) / (advantages.std() + 1e-8)


def ppo_loss_and_grads(
    net: PolicyNetwork, batch: Batch, cfg: PPOConfig
) -> tuple[LossStats, Params]:
    """Loss = -clipped surrogate + c1 * squared value error - c2 * entropy, and its gradient.

    The advantages in ``batch`` are used as given.
    """
    n = len(batch)
    fwd = net.forward(batch.obs)
    logp_all = log_softmax(fwd.logits)
    probs = np.exp(logp_all)
    rows = np.arange(n)
    logp = logp_all[rows, batch.actions]
    log_ratio = logp - batch.old_logp
    z = np.exp(log_ratio)
    adv = batch.advantages
    eps = cfg.clip_epsilon

    surr1 = z * adv
    surr2 = np.clip(z, 1.0 - eps, 1.0 + eps) * adv
    objective = float(np.mean(np.minimum(surr1, surr2)))
    err = fwd.values - batch.returns
    value_loss = float(np.mean(err**2))
    entropy_per = -np.sum(probs * logp_all, axis=1)
    entropy = float(np.mean(entropy_per))
    loss = -objective + cfg.value_coef * value_loss - cfg.entropy_coef * entropy

    stats = LossStats(
        loss=loss,
        policy_objective=objective,
        value_loss=value_loss,
        entropy=entropy,
        approx_kl=float(np.mean((z - 1.0) - log_ratio)),
        clip_fraction=float(np.mean(np.abs(z - 1.0) > eps)),
    )
    if not np.isfinite(loss):
        raise TrainingDivergence("non-finite PPO loss", vars(stats))

    # the unclipped branch carries the gradient wherever it is the minimum
    unclipped = surr1 <= surr2
    dlogp = -(adv * z * unclipped) / n
    onehot = np.zeros_like(probs)
    onehot[rows, batch.actions] = 1.0
    dlogits = dlogp[:, None] * (onehot - probs)
    if cfg.entropy_coef:
        dlogits += (cfg.entropy_coef / n) * probs * (logp_all + entropy_per[:, None])
    dvalues = (2.0 * cfg.value_coef / n) * err
    return stats, net.backward(fwd, dlogits, dvalues)


def ppo_update(
    net: PolicyNetwork,
    optimizer: Adam,
    batch: Batch,
    cfg: PPOConfig,
    rng: np.random.Generator,
) -> LossStats:
    """Run the configured epochs of shuffled minibatch Adam steps; returns mean statistics."""
    batch = Batch(
        batch.obs,
        batch.actions,
        batch.old_logp,
        normalize_advantages(batch.advantages),
        batch.returns,
        batch.old_values,
    )
    history: list[LossStats] = []
    for _ in range(cfg.epochs):
        order = rng.permutation(len(batch))
        for start in range(0, len(batch), cfg.minibatch_size):
            stats, grads = ppo_loss_and_grads(net, batch.take(order[start : start + cfg.minibatch_size]), cfg)
            grads, _ = clip_by_global_norm(grads, cfg.max_grad_norm)
            optimizer.step(net.params, grads)
            history.append(stats)
    return LossStats(
        **{
            name: float(np.mean([getattr(s, name) for s in history]))
            for name in LossStats.__dataclass_fields__
        }
    )
