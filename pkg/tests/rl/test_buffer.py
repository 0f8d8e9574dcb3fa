import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mergelab.rl.buffer import RolloutBuffer, compute_gae


def test_two_step_advantage():
    advantages, returns = compute_gae(
        np.array([[1.0], [1.0]]),
        np.zeros((2, 1)),
        np.zeros((2, 1)),
        np.zeros(1),
        gamma=0.99,
        gae_lambda=0.95,
    )
    assert advantages[0, 0] == pytest.approx(1.9405)
    assert advantages[1, 0] == pytest.approx(1.0)
    np.testing.assert_allclose(returns, advantages)


def test_no_bootstrap_across_episode_end():
    advantages, _ = compute_gae(
        np.array([[1.0], [1.0]]),
        np.array([[0.0], [10.0]]),
        np.array([[1.0], [0.0]]),
        np.array([10.0]),
        gamma=0.99,
        gae_lambda=0.95,
    )
    assert advantages[0, 0] == pytest.approx(1.0)
    assert advantages[1, 0] == pytest.approx(1.0 + 0.99 * 10.0 - 10.0)


@given(
    st.lists(st.floats(-5.0, 5.0), min_size=1, max_size=8),
    st.floats(-5.0, 5.0),
    st.floats(0.5, 0.999),
)
def test_unit_lambda_returns_are_discounted_sums(rewards, last_value, gamma):
    r = np.array(rewards)[:, None]
    values = np.zeros_like(r)
    _, returns = compute_gae(r, values, np.zeros_like(r), np.array([last_value]), gamma, 1.0)
    expected = sum(gamma**k * x for k, x in enumerate(rewards)) + gamma ** len(rewards) * last_value
    assert returns[0, 0] == pytest.approx(expected, abs=1e-9)


def test_buffer_flattens_environment_major():
    buffer = RolloutBuffer(horizon=3, n_envs=2, obs_dim=1)
    for t in range(3):
        buffer.add(
            obs=np.array([[10.0 * t], [10.0 * t + 1]]),
            actions=np.array([t, 10 + t]),
            logp=np.zeros(2),
            rewards=np.ones(2),
            values=np.zeros(2),
            dones=np.zeros(2),
        )
    assert buffer.full
    buffer.finish(np.zeros(2), gamma=0.99, gae_lambda=0.95)
    batch = buffer.flatten()
    assert len(batch) == 6
    np.testing.assert_array_equal(batch.actions, [0, 1, 2, 10, 11, 12])
    np.testing.assert_array_equal(batch.obs[:, 0], [0.0, 10.0, 20.0, 1.0, 11.0, 21.0])
    subset = batch.take(np.array([3, 0]))
    np.testing.assert_array_equal(subset.actions, [10, 0])
    buffer.reset()
    assert not buffer.full
