import math

import numpy as np
import pytest

from mergelab.config import evaluation_scenario
from mergelab.env.actions import IDLE, LANE_CHANGE
from mergelab.env.merge_env import Terminal
from mergelab.evaluation.harness import (
    density_sweep,
    load_policy,
    periodic_evaluation,
    run_episode,
    run_evaluation,
    svo_sweep,
)
from mergelab.rl.checkpoint import make_checkpoint, save_checkpoint
from mergelab.rl.network import PolicyNetwork
from mergelab.rl.optim import Adam
from mergelab.rl.ppo import PPOConfig
from mergelab.sim.trajectory import TrajectoryRecorder


class Constant:
    def __init__(self, action: int) -> None:
        self.action = action

    def greedy(self, obs: np.ndarray) -> int:
        return self.action


@pytest.fixture
def checkpoint(tmp_path):
    net = PolicyNetwork.initialize(np.random.default_rng(0), hidden=(8,))
    path = tmp_path / "checkpoint.json"
    doc = make_checkpoint("ppo", net, Adam(3e-4), 0, np.random.default_rng(0), math.pi / 2, PPOConfig())
    save_checkpoint(path, doc)
    return path


def test_idle_ego_runs_out_of_ramp():
    outcome = run_episode(Constant(IDLE), evaluation_scenario("easy"), seed=0)
    assert outcome.terminal == Terminal.CRASHED
    assert outcome.merge_snapshot is None


def test_episode_is_recorded():
    recorder = TrajectoryRecorder()
    outcome = run_episode(Constant(LANE_CHANGE), evaluation_scenario("easy"), seed=1, recorder=recorder)
    assert outcome.terminal in set(Terminal)
    ego_rows = recorder.rows_for(outcome.ego_id)
    assert ego_rows[0].x == 0.0
    assert len(ego_rows) >= outcome.steps


def test_evaluation_is_deterministic():
    policy = Constant(LANE_CHANGE)
    a = run_evaluation(policy, "medium", 3, seed0=10)
    b = run_evaluation(policy, "medium", 3, seed0=10)
    assert a.records == b.records
    assert [r.episode_seed for r in a.records] == [10, 11, 12]
    assert a.summary.n_episodes == 3


def test_periodic_hook():
    hook = periodic_evaluation(evaluation_scenario("easy"), episodes=2, seed0=0)
    point = hook(Constant(IDLE), 0)
    assert point.episodes == 2
    assert point.collision_pct == 100.0


def test_load_policy(checkpoint):
    result = load_policy(checkpoint)
    assert result.is_ok()
    policy, phi = result.ok
    assert phi == math.pi / 2
    assert 0 <= policy.greedy(np.zeros(14)) < 14


def test_missing_checkpoint_fails_only_its_column(checkpoint, tmp_path):
    columns = svo_sweep({"a": checkpoint, "b": tmp_path / "absent.json", "c": None}, "easy", n=1)
    assert [c.label for c in columns] == ["a", "b", "c"]
    assert columns[0].result.is_ok()
    assert columns[1].result.is_error()
    assert str(columns[2].result.error) == "no checkpoint for c"


def test_density_sweep_columns(checkpoint):
    columns = density_sweep(checkpoint, n=1)
    assert [c.label for c in columns] == ["easy", "medium", "hard"]
    assert all(c.result.is_ok() for c in columns)


@pytest.mark.slow
def test_workers_do_not_change_results():
    policy = Constant(LANE_CHANGE)
    serial = run_evaluation(policy, "hard", 4, seed0=0)
    parallel = run_evaluation(policy, "hard", 4, seed0=0, workers=2)
    assert serial.records == parallel.records
