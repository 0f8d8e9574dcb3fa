import json

import numpy as np
import pytest
from expression import Ok

from mergelab.rl.checkpoint import (
    CHECKPOINT_FORMAT_VERSION,
    load_checkpoint,
    make_checkpoint,
    network_from,
    optimizer_from_doc,
    restore_rng,
    save_checkpoint,
)
from mergelab.rl.network import PolicyNetwork, QNetwork
from mergelab.rl.optim import Adam
from mergelab.rl.ppo import PPOConfig


@pytest.fixture
def trained():
    net = PolicyNetwork.initialize(np.random.default_rng(0), hidden=(8, 8))
    adam = Adam(3e-4)
    adam.step(net.params, {k: np.ones_like(v) for k, v in net.params.items()})
    rng = np.random.default_rng(9)
    rng.random(5)
    return net, adam, rng


def test_checkpoint_restores_the_run(tmp_path, trained):
    net, adam, rng = trained
    doc = make_checkpoint("ppo", net, adam, 4096, rng, 0.5, PPOConfig(hidden=(8, 8)))
    path = tmp_path / "run" / "checkpoint.json"
    assert save_checkpoint(path, doc) == Ok(path)

    result = load_checkpoint(path, "ppo")
    assert result.is_ok(), str(result)
    loaded = result.ok
    assert loaded.timestep == 4096
    assert loaded.svo_phi == 0.5
    assert loaded.config["hidden"] == [8, 8]
    restored = network_from(loaded)
    assert isinstance(restored, PolicyNetwork)
    obs = np.random.default_rng(1).standard_normal((3, 14))
    np.testing.assert_array_equal(restored.forward(obs).logits, net.forward(obs).logits)
    optimizer = optimizer_from_doc(loaded.optimizer)
    assert optimizer.t == 1
    np.testing.assert_array_equal(optimizer.m["W0"], adam.m["W0"])
    assert restore_rng(loaded).random() == rng.random()


def test_dqn_checkpoint_carries_the_target(tmp_path):
    net = QNetwork.initialize(np.random.default_rng(0), hidden=(4,))
    target = net.copy()
    doc = make_checkpoint(
        "dqn", net, Adam(1e-4), 10, np.random.default_rng(0), 0.0, PPOConfig(), target=target, episodes=3
    )
    path = tmp_path / "dqn.json"
    save_checkpoint(path, doc)
    loaded = load_checkpoint(path).default_value(None)
    assert loaded.kind == "dqn"
    assert loaded.episodes == 3
    assert isinstance(network_from(loaded), QNetwork)
    assert set(loaded.target_params) == set(net.params)


def test_kind_mismatch(tmp_path, trained):
    net, adam, rng = trained
    path = tmp_path / "c.json"
    save_checkpoint(path, make_checkpoint("ppo", net, adam, 0, rng, 0.0, PPOConfig()))
    result = load_checkpoint(path, "dqn")
    assert result.is_error()
    assert result.error.tag == "kind"
    assert "expected dqn" in str(result.error)


def test_unsupported_format_version(tmp_path, trained):
    net, adam, rng = trained
    data = json.loads(make_checkpoint("ppo", net, adam, 0, rng, 0.0, PPOConfig()).model_dump_json())
    data["format_version"] = CHECKPOINT_FORMAT_VERSION + 1
    path = tmp_path / "future.json"
    path.write_text(json.dumps(data))
    result = load_checkpoint(path)
    assert result.is_error()
    assert result.error.tag == "version"


@pytest.mark.parametrize("text", ["not json", "[]", '{"format_version": 1}'])
def test_malformed_checkpoint(tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    result = load_checkpoint(path)
    assert result.is_error()
    assert result.error.tag == "format"


def test_missing_checkpoint(tmp_path):
    result = load_checkpoint(tmp_path / "absent.json")
    assert result.is_error()
    assert result.error.tag == "file"
