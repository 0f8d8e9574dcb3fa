"""Merge task as a Markov decision process: observation, actions and social reward."""

from .actions import ACCELERATIONS, LANE_CHANGE, N_ACTIONS, DecodedAction, decode_action
from .merge_env import (
    EpisodeOutcome,
    MergeEnv,
    MergeSnapshot,
    Terminal,
    apply_action,
    lane_change_allowed,
)
from .observation import OBS_DIM, Observation, observe
from .reward import (
    MergeGap,
    RewardConfig,
    ego_utility,
    merge_gap,
    reward,
    social_reward,
    sv_utility,
)

__all__ = [
    "ACCELERATIONS",
    "LANE_CHANGE",
    "N_ACTIONS",
    "OBS_DIM",
    "DecodedAction",
    "EpisodeOutcome",
    "MergeEnv",
    "MergeGap",
    "MergeSnapshot",
    "Observation",
    "RewardConfig",
    "Terminal",
    "apply_action",
    "decode_action",
    "ego_utility",
    "lane_change_allowed",
    "merge_gap",
    "observe",
    "reward",
    "social_reward",
    "sv_utility",
]
