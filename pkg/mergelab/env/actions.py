"""The discrete action set: 13 accelerations and one lane-change request."""

from dataclasses import dataclass

import numpy as np

from mergelab.utils.error_handling import require

ACCELERATIONS: tuple[float, ...] = tuple(float(a) for a in np.linspace(-3.0, 3.0, 13))
LANE_CHANGE = len(ACCELERATIONS)
N_ACTIONS = LANE_CHANGE + 1
IDLE = ACCELERATIONS.index(0.0)


@dataclass(frozen=True)
class DecodedAction:
    accel: float
    lane_change: bool


def decode_action(index: int) -> DecodedAction:
    require(0 <= int(index) < N_ACTIONS, f"action index must lie in [0, {N_ACTIONS - 1}], got {index}")
    if int(index) == LANE_CHANGE:
        return DecodedAction(accel=0.0, lane_change=True)
    return DecodedAction(accel=ACCELERATIONS[int(index)], lane_change=False)
