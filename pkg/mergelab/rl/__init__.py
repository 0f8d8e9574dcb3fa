"""From-scratch actor-critic PPO with GAE, vectorized rollouts and a DQN baseline."""

from .buffer import Batch, RolloutBuffer, compute_gae
from .checkpoint import (
    CHECKPOINT_FORMAT_VERSION,
    CheckpointDocument,
    CheckpointError,
    load_checkpoint,
    make_checkpoint,
    network_from,
    save_checkpoint,
)
from .dqn import DQNConfig, DQNState, ReplayBuffer, dqn_train, epsilon_at, init_dqn
from .network import GreedyPolicy, PolicyNetwork, QNetwork, log_softmax, softmax
from .optim import Adam, clip_by_global_norm, global_norm
from .ppo import LossStats, PPOConfig, ppo_loss_and_grads, ppo_update
from .trainer import (
    TRAINING_LOG_FORMAT_VERSION,
    EvalPoint,
    EvalRecord,
    TrainerState,
    UpdateRecord,
    init_trainer,
    parse_record,
    planned_updates,
    train,
    training_curve_csv,
)
from .vec_env import EnvFactory, ProcessVecEnv, SequentialVecEnv, VecStep, make_vec_env

__all__ = [
    "CHECKPOINT_FORMAT_VERSION",
    "TRAINING_LOG_FORMAT_VERSION",
    "Adam",
    "Batch",
    "CheckpointDocument",
    "CheckpointError",
    "DQNConfig",
    "DQNState",
    "EnvFactory",
    "EvalPoint",
    "EvalRecord",
    "GreedyPolicy",
    "LossStats",
    "PPOConfig",
    "PolicyNetwork",
    "ProcessVecEnv",
    "QNetwork",
    "ReplayBuffer",
    "RolloutBuffer",
    "SequentialVecEnv",
    "TrainerState",
    "UpdateRecord",
    "VecStep",
    "clip_by_global_norm",
    "compute_gae",
    "dqn_train",
    "epsilon_at",
    "global_norm",
    "init_dqn",
    "init_trainer",
    "load_checkpoint",
    "log_softmax",
    "make_checkpoint",
    "make_vec_env",
    "network_from",
    "parse_record",
    "planned_updates",
    "ppo_loss_and_grads",
    "ppo_update",
    "save_checkpoint",
    "softmax",
    "train",
    "training_curve_csv",
]
