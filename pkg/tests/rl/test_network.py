import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mergelab.rl.network import (
    PolicyNetwork,
    QNetwork,
    log_softmax,
    orthogonal,
    softmax,
    trunk_forward,
)
from mergelab.utils.error_handling import ContractViolation

finite_logits = arrays(
    np.float64,
    st.tuples(st.integers(1, 4), st.integers(2, 14)),
    elements=st.floats(-50.0, 50.0),
)


def test_hidden_layers_are_relu():
    params = {"W0": np.eye(3), "b0": np.array([0.0, 0.5, -1.0])}
    h, cache = trunk_forward(params, 1, np.array([[-2.0, 1.0, 0.5]]))
    np.testing.assert_array_equal(h, [[0.0, 1.5, 0.0]])
    np.testing.assert_array_equal(cache.pre_activations[0], [[-2.0, 1.5, -0.5]])


@given(finite_logits)
def test_softmax_is_a_distribution(logits):
    p = softmax(logits)
    assert (p >= 0.0).all()
    np.testing.assert_allclose(p.sum(axis=-1), 1.0)


@given(finite_logits)
def test_log_softmax_agrees_with_softmax(logits):
    np.testing.assert_allclose(np.exp(log_softmax(logits)), softmax(logits), atol=1e-12)


def test_softmax_survives_large_logits():
    p = softmax(np.array([[1000.0, 1000.0, -1000.0]]))
    np.testing.assert_allclose(p, [[0.5, 0.5, 0.0]])


@pytest.mark.parametrize("shape", [(14, 64), (64, 64), (64, 14), (64, 1)])
def test_orthogonal_init(shape):
    w = orthogonal(shape, 2.0, np.random.default_rng(0))
    assert w.shape == shape
    gram = w @ w.T if shape[0] <= shape[1] else w.T @ w
    np.testing.assert_allclose(gram, 4.0 * np.eye(min(shape)), atol=1e-10)


class TestPolicyNetwork:
    def test_shapes(self):
        net = PolicyNetwork.initialize(np.random.default_rng(0))
        fwd = net.forward(np.zeros((5, 14)))
        assert fwd.logits.shape == (5, 14)
        assert fwd.values.shape == (5,)
        assert net.obs_dim == 14
        assert net.n_actions == 14

    def test_same_seed_same_weights(self):
        a = PolicyNetwork.initialize(np.random.default_rng(3))
        b = PolicyNetwork.initialize(np.random.default_rng(3))
        for name in a.params:
            np.testing.assert_array_equal(a.params[name], b.params[name])

    def test_near_uniform_initial_policy(self):
        net = PolicyNetwork.initialize(np.random.default_rng(0))
        obs = np.random.default_rng(1).uniform(-1.0, 1.0, (10, 14))
        probs = softmax(net.forward(obs).logits)
        np.testing.assert_allclose(probs, 1.0 / 14, atol=0.02)

    def test_rejects_non_finite_observations(self):
        net = PolicyNetwork.initialize(np.random.default_rng(0))
        obs = np.zeros(14)
        obs[3] = np.nan
        with pytest.raises(ContractViolation):
            net.forward(obs)

    def test_rejects_non_finite_weights(self):
        net = PolicyNetwork.initialize(np.random.default_rng(0))
        net.params["W1"][0, 0] = np.inf
        with pytest.raises(ContractViolation):
            net.forward(np.zeros(14))

    def test_sampling(self):
        net = PolicyNetwork.initialize(np.random.default_rng(0))
        obs = np.random.default_rng(1).uniform(-1.0, 1.0, (50, 14))
        actions, logp, values = net.sample(obs, np.random.default_rng(2))
        assert ((actions >= 0) & (actions < 14)).all()
        expected = log_softmax(net.forward(obs).logits)[np.arange(50), actions]
        np.testing.assert_allclose(logp, expected)
        np.testing.assert_allclose(values, net.forward(obs).values)
        again, _, _ = net.sample(obs, np.random.default_rng(2))
        np.testing.assert_array_equal(actions, again)

    def test_sampling_follows_the_policy(self):
        net = PolicyNetwork.initialize(np.random.default_rng(0), obs_dim=2, n_actions=3, hidden=(4,))
        net.params["bpi"] = np.array([0.0, np.log(3.0), -50.0])
        net.params["Wpi"] = np.zeros_like(net.params["Wpi"])
        actions, _, _ = net.sample(np.zeros((20_000, 2)), np.random.default_rng(5))
        counts = np.bincount(actions, minlength=3) / 20_000
        np.testing.assert_allclose(counts, [0.25, 0.75, 0.0], atol=0.02)

    def test_greedy_picks_the_largest_logit(self):
        net = PolicyNetwork.initialize(np.random.default_rng(0), obs_dim=2, n_actions=3, hidden=(4,))
        net.params["Wpi"] = np.zeros_like(net.params["Wpi"])
        net.params["bpi"] = np.array([0.1, 0.3, 0.2])
        assert net.greedy(np.zeros(2)) == 1

    def test_copy_is_independent(self):
        net = PolicyNetwork.initialize(np.random.default_rng(0))
        clone = net.copy()
        clone.params["W0"] += 1.0
        assert not np.allclose(net.params["W0"], clone.params["W0"])

    def test_backward_matches_finite_differences(self):
        rng = np.random.default_rng(7)
        net = PolicyNetwork.initialize(rng, obs_dim=5, n_actions=4, hidden=(8, 8))
        obs = rng.standard_normal((6, 5))
        c_logits = rng.standard_normal((6, 4))
        c_values = rng.standard_normal(6)

        def loss() -> float:
            fwd = net.forward(obs)
            return float((c_logits * fwd.logits).sum() + (c_values * fwd.values).sum())

        grads = net.backward(net.forward(obs), c_logits, c_values)
        assert set(grads) == set(net.params)
        h = 1e-5
        for name, param in net.params.items():
            numeric = np.zeros_like(param)
            for idx in np.ndindex(param.shape):
                saved = param[idx]
                param[idx] = saved + h
                up = loss()
                param[idx] = saved - h
                down = loss()
                param[idx] = saved
                numeric[idx] = (up - down) / (2 * h)
            err = np.abs(grads[name] - numeric).max() / max(np.abs(numeric).max(), 1e-8)
            assert err < 1e-4, name


class TestQNetwork:
    def test_shapes_and_greedy(self):
        net = QNetwork.initialize(np.random.default_rng(0))
        q = net.q_values(np.zeros((3, 14)))
        assert q.shape == (3, 14)
        assert net.greedy(np.zeros(14)) == int(np.argmax(q[0]))

    def test_backward_matches_finite_differences(self):
        rng = np.random.default_rng(11)
        net = QNetwork.initialize(rng, obs_dim=4, n_actions=3, hidden=(6,))
        obs = rng.standard_normal((5, 4))
        c = rng.standard_normal((5, 3))

        def loss() -> float:
            return float((c * net.q_values(obs)).sum())

        q, features, cache = net.forward(obs)
        grads = net.backward(features, cache, c)
        h = 1e-5
        for name, param in net.params.items():
            numeric = np.zeros_like(param)
            for idx in np.ndindex(param.shape):
                saved = param[idx]
                param[idx] = saved + h
                up = loss()
                param[idx] = saved - h
                down = loss()
                param[idx] = saved
                numeric[idx] = (up - down) / (2 * h)
            err = np.abs(grads[name] - numeric).max() / max(np.abs(numeric).max(), 1e-8)
            assert err < 1e-4, name
