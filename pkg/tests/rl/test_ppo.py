import numpy as np
import pytest

from mergelab.rl.buffer import Batch
from mergelab.rl.network import PolicyNetwork, log_softmax, softmax
from mergelab.rl.optim import Adam
from mergelab.rl.ppo import PPOConfig, normalize_advantages, ppo_loss_and_grads, ppo_update
from mergelab.utils.error_handling import TrainingDivergence


def uniform_net(n_actions: int = 14) -> PolicyNetwork:
    net = PolicyNetwork.initialize(np.random.default_rng(0), obs_dim=14, n_actions=n_actions)
    net.params["Wpi"] = np.zeros_like(net.params["Wpi"])
    return net


def single_sample(net: PolicyNetwork, ratio: float, advantage: float) -> Batch:
    obs = np.zeros((1, 14))
    fwd = net.forward(obs)
    logp = log_softmax(fwd.logits)[0, 0]
    return Batch(
        obs=obs,
        actions=np.array([0]),
        old_logp=np.array([logp - np.log(ratio)]),
        advantages=np.array([advantage]),
        returns=fwd.values.copy(),
        old_values=fwd.values.copy(),
    )


@pytest.mark.parametrize(
    ("ratio", "advantage", "expected"),
    [(1.0, 0.7, 0.7), (1.3, 1.0, 1.2), (0.5, -1.0, -0.8), (0.5, 1.0, 0.5), (1.3, -1.0, -1.3)],
)
def test_clipped_surrogate(ratio, advantage, expected):
    net = uniform_net()
    stats, _ = ppo_loss_and_grads(net, single_sample(net, ratio, advantage), PPOConfig())
    assert stats.policy_objective == pytest.approx(expected)
    assert stats.value_loss == pytest.approx(0.0)


def test_clipped_branch_has_no_policy_gradient():
    net = uniform_net()
    _, grads = ppo_loss_and_grads(net, single_sample(net, 1.3, 1.0), PPOConfig())
    np.testing.assert_array_equal(grads["Wpi"], 0.0)
    np.testing.assert_array_equal(grads["bpi"], 0.0)


def test_zero_entropy_coefficient_ignores_entropy():
    rng = np.random.default_rng(1)
    net = PolicyNetwork.initialize(rng)
    batch = random_batch(net, rng, 16)
    base, grads = ppo_loss_and_grads(net, batch, PPOConfig(entropy_coef=0.0))
    assert base.loss == pytest.approx(-base.policy_objective + 0.5 * base.value_loss)
    _, with_entropy = ppo_loss_and_grads(net, batch, PPOConfig(entropy_coef=0.1))
    assert not np.array_equal(grads["bpi"], with_entropy["bpi"])


def random_batch(net: PolicyNetwork, rng: np.random.Generator, n: int) -> Batch:
    obs = rng.standard_normal((n, net.obs_dim))
    actions = rng.integers(0, net.n_actions, n)
    logp = log_softmax(net.forward(obs).logits)[np.arange(n), actions]
    return Batch(
        obs=obs,
        actions=actions,
        old_logp=logp + rng.normal(0.0, 0.1, n),
        advantages=rng.standard_normal(n),
        returns=rng.standard_normal(n),
        old_values=np.zeros(n),
    )


def test_loss_gradient_matches_finite_differences():
    rng = np.random.default_rng(3)
    net = PolicyNetwork.initialize(rng, obs_dim=14, n_actions=14, hidden=(8, 8))
    batch = random_batch(net, rng, 12)
    cfg = PPOConfig(entropy_coef=0.01)
    _, grads = ppo_loss_and_grads(net, batch, cfg)
    h = 1e-5
    for name, param in net.params.items():
        numeric = np.zeros_like(param)
        for idx in np.ndindex(param.shape):
            saved = param[idx]
            param[idx] = saved + h
            up = ppo_loss_and_grads(net, batch, cfg)[0].loss
            param[idx] = saved - h
            down = ppo_loss_and_grads(net, batch, cfg)[0].loss
            param[idx] = saved
            numeric[idx] = (up - down) / (2 * h)
        err = np.abs(grads[name] - numeric).max() / max(np.abs(numeric).max(), 1e-8)
        assert err < 1e-4, name


def test_non_finite_loss_raises_with_diagnostics():
    net = uniform_net()
    batch = single_sample(net, 1.0, float("nan"))
    with pytest.raises(TrainingDivergence) as excinfo:
        ppo_loss_and_grads(net, batch, PPOConfig())
    assert "policy_objective" in excinfo.value.diagnostics


def test_normalized_advantages():
    a = normalize_advantages(np.array([1.0, 2.0, 3.0, 4.0]))
    assert a.mean() == pytest.approx(0.0)
    assert a.std() == pytest.approx(1.0, rel=1e-6)


def test_update_shifts_probability_toward_advantaged_actions():
    rng = np.random.default_rng(0)
    net = PolicyNetwork.initialize(rng)
    obs = rng.uniform(-1.0, 1.0, (128, 14))
    actions = np.array([3] * 64 + [5] * 64)
    logp = log_softmax(net.forward(obs).logits)[np.arange(128), actions]
    values = net.forward(obs).values
    batch = Batch(obs, actions, logp, np.array([1.0] * 64 + [-1.0] * 64), values, values)
    before = softmax(net.forward(obs).logits).mean(axis=0)
    stats = ppo_update(net, Adam(1e-2), batch, PPOConfig(learning_rate=1e-2), np.random.default_rng(1))
    after = softmax(net.forward(obs).logits).mean(axis=0)
    assert after[3] > before[3]
    assert after[5] < before[5]
    assert np.isfinite(stats.loss)


def test_batch_size():
    assert PPOConfig(horizon=2048, n_envs=20).batch_size == 40_960
