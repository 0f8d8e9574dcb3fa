"""Fully connected actor-critic and Q networks in plain numpy (float64).

Parameters live in one flat dict so the optimizer and checkpoint code can treat every
network alike: trunk layers ``W0, b0, W1, b1, ...`` followed by head layers named after
the head.
"""

from dataclasses import dataclass
from typing import Protocol

import numpy as np

from mergelab.utils.error_handling import require

Params = dict[str, np.ndarray]

TRUNK_GAIN = float(np.sqrt(2.0))
POLICY_GAIN = 0.01
VALUE_GAIN = 1.0


def orthogonal(shape: tuple[int, int], gain: float, rng: np.random.Generator) -> np.ndarray:
    """Orthogonal matrix of the given (fan_in, fan_out) shape scaled by gain."""
    rows, cols = shape
    flat = rng.standard_normal((max(rows, cols), min(rows, cols)))
    q, r = np.linalg.qr(flat)
    q = q * np.sign(np.diag(r))
    if rows < cols:
        q = q.T
    return gain * q[:rows, :cols]


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))


def _check_finite(params: Params) -> None:
    for name, value in params.items():
        require(bool(np.isfinite(value).all()), f"non-finite weights in {name}")


@dataclass(frozen=True)
class TrunkCache:
    inputs: list[np.ndarray]
    pre_activations: list[np.ndarray]


def trunk_forward(params: Params, depth: int, x: np.ndarray) -> tuple[np.ndarray, TrunkCache]:
    inputs, pre = [], []
    h = x
    for i in range(depth):
        inputs.append(h)
        a = h @ params[f"W{i}"] + params[f"b{i}"]
        pre.append(a)
        h = np.maximum(a, 0.0)
    return h, TrunkCache(inputs, pre)


def trunk_backward(params: Params, depth: int, cache: TrunkCache, dh: np.ndarray, grads: Params) -> None:
    for i in reversed(range(depth)):
        da = dh * (cache.pre_activations[i] > 0.0)
        grads[f"W{i}"] = cache.inputs[i].T @ da
        grads[f"b{i}"] = da.sum(axis=0)
        dh = da @ params[f"W{i}"].T


def _init_trunk(
    obs_dim: int, hidden: tuple[int, ...], rng: np.random.Generator
) -> Params:
    params: Params = {}
    sizes = (obs_dim, *hidden)
    for i, (fan_in, fan_out) in enumerate(zip(sizes, sizes[1:], strict=False)):
        params[f"W{i}"] = orthogonal((fan_in, fan_out), TRUNK_GAIN, rng)
        params[f"b{i}"] = np.zeros(fan_out)
    return params


@dataclass(frozen=True)
class PolicyForward:
    logits: np.ndarray
    values: np.ndarray
    features: np.ndarray
    cache: TrunkCache


class PolicyNetwork:
    """Shared ReLU trunk with a softmax policy head and a scalar value head."""

    def __init__(self, params: Params, hidden: tuple[int, ...]) -> None:
        self.params = params
        self.hidden = tuple(hidden)

    @classmethod
    def initialize(
        cls,
        rng: np.random.Generator,
        obs_dim: int = 14,
        n_actions: int = 14,
        hidden: tuple[int, ...] = (64, 64),
    ) -> "PolicyNetwork":
        params = _init_trunk(obs_dim, hidden, rng)
        width = hidden[-1]
        params["Wpi"] = orthogonal((width, n_actions), POLICY_GAIN, rng)
        params["bpi"] = np.zeros(n_actions)
        params["Wv"] = orthogonal((width, 1), VALUE_GAIN, rng)
        params["bv"] = np.zeros(1)
        return cls(params, hidden)

    @property
    def obs_dim(self) -> int:
        return self.params["W0"].shape[0]

    @property
    def n_actions(self) -> int:
        return self.params["Wpi"].shape[1]

    def forward(self, obs: np.ndarray) -> PolicyForward:
        obs = np.atleast_2d(np.asarray(obs, dtype=np.float64))
        require(bool(np.isfinite(obs).all()), "observation contains non-finite values")
        _check_finite(self.params)
        h, cache = trunk_forward(self.params, len(self.hidden), obs)
        logits = h @ self.params["Wpi"] + self.params["bpi"]
        values = (h @ self.params["Wv"] + self.params["bv"])[:, 0]
        return PolicyForward(logits, values, h, cache)

    def backward(self, fwd: PolicyForward, dlogits: np.ndarray, dvalues: np.ndarray) -> Params:
        grads: Params = {
            "Wpi": fwd.features.T @ dlogits,
            "bpi": dlogits.sum(axis=0),
            "Wv": fwd.features.T @ dvalues[:, None],
            "bv": np.array([dvalues.sum()]),
        }
        dh = dlogits @ self.params["Wpi"].T + dvalues[:, None] @ self.params["Wv"].T
        trunk_backward(self.params, len(self.hidden), fwd.cache, dh, grads)
        return grads

    def sample(
        self, obs: np.ndarray, rng: np.random.Generator
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(actions, log-probabilities, values) for a batch, sampling by inverse CDF."""
        fwd = self.forward(obs)
        logp = log_softmax(fwd.logits)
        cdf = np.cumsum(np.exp(logp), axis=1)
        u = rng.random(len(cdf))[:, None]
        actions = np.minimum((cdf < u * cdf[:, -1:]).sum(axis=1), self.n_actions - 1)
        return actions, logp[np.arange(len(actions)), actions], fwd.values

    def greedy(self, obs: np.ndarray) -> int:
        return int(np.argmax(self.forward(obs).logits[0]))

    def copy(self) -> "PolicyNetwork":
        return PolicyNetwork({k: v.copy() for k, v in self.params.items()}, self.hidden)


class QNetwork:
    """ReLU trunk with one linear output per action."""

    def __init__(self, params: Params, hidden: tuple[int, ...]) -> None:
        self.params = params
        self.hidden = tuple(hidden)

    @classmethod
    def initialize(
        cls,
        rng: np.random.Generator,
        obs_dim: int = 14,
        n_actions: int = 14,
        hidden: tuple[int, ...] = (64, 64),
    ) -> "QNetwork":
        params = _init_trunk(obs_dim, hidden, rng)
        params["Wq"] = orthogonal((hidden[-1], n_actions), VALUE_GAIN, rng)
        params["bq"] = np.zeros(n_actions)
        return cls(params, hidden)

    @property
    def obs_dim(self) -> int:
        return self.params["W0"].shape[0]

    @property
    def n_actions(self) -> int:
        return self.params["Wq"].shape[1]

    def forward(self, obs: np.ndarray) -> tuple[np.ndarray, np.ndarray, TrunkCache]:
        obs = np.atleast_2d(np.asarray(obs, dtype=np.float64))
        _check_finite(self.params)
        h, cache = trunk_forward(self.params, len(self.hidden), obs)
        return h @ self.params["Wq"] + self.params["bq"], h, cache

    def q_values(self, obs: np.ndarray) -> np.ndarray:
        return self.forward(obs)[0]

    def backward(self, features: np.ndarray, cache: TrunkCache, dq: np.ndarray) -> Params:
        grads: Params = {"Wq": features.T @ dq, "bq": dq.sum(axis=0)}
        trunk_backward(self.params, len(self.hidden), cache, dq @ self.params["Wq"].T, grads)
        return grads

    def greedy(self, obs: np.ndarray) -> int:
        return int(np.argmax(self.q_values(obs)[0]))

    def copy(self) -> "QNetwork":
        return QNetwork({k: v.copy() for k, v in self.params.items()}, self.hidden)


class GreedyPolicy(Protocol):
    def greedy(self, obs: np.ndarray) -> int: ...
