"""Commands package for the mergelab CLI."""

from collections.abc import Callable
from typing import Any

from .dqn import dqn
from .evaluate import evaluate
from .replay import replay
from .sweep import density_sweep_command, sweep
from .train import train

# Command function type hint
CommandFunction = Callable[..., Any]

COMMAND_CATEGORIES: dict[str, str] = {
    "training": "Policy training",
    "evaluation": "Evaluation and sweeps",
    "inspection": "Episode replay",
}

COMMANDS_BY_CATEGORY: dict[str, dict[str, tuple[CommandFunction, str]]] = {
    "training": {
        "train": (train, "Train a PPO merging policy"),
        "dqn": (dqn, "Train the DQN baseline"),
    },
    "evaluation": {
        "eval": (evaluate, "Evaluate a checkpoint at one density"),
        "sweep": (sweep, "Compare checkpoints trained with different SVO angles"),
        "density-sweep": (density_sweep_command, "Evaluate one checkpoint at every density"),
    },
    "inspection": {
        "replay": (replay, "Re-simulate one episode and write its trajectory"),
    },
}

COMMANDS: dict[str, tuple[CommandFunction, str]] = {}
for category_commands in COMMANDS_BY_CATEGORY.values():
    COMMANDS.update(category_commands)

__all__ = [
    "COMMANDS",
    "COMMANDS_BY_CATEGORY",
    "COMMAND_CATEGORIES",
    "density_sweep_command",
    "dqn",
    "evaluate",
    "replay",
    "sweep",
    "train",
]
