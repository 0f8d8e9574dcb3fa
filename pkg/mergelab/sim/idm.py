"""Intelligent driver model car-following law."""

import math

from mergelab.utils.error_handling import require

from .vehicle import DriverParams

ACCEL_FLOOR = -9.0


def desired_gap(v: float, v_leader: float, p: DriverParams) -> float:
    """Dynamic desired gap s*; the braking term never goes below zero."""
    interaction = v * (v - v_leader) / (2.0 * math.sqrt(p.max_accel * p.comfortable_decel))
    return p.min_gap + max(0.0, v * p.time_headway + interaction)


def idm_acceleration(v: float, v_leader: float, gap: float, p: DriverParams) -> float:
    """IDM acceleration, clamped to [ACCEL_FLOOR, max_accel].

    ``gap`` is the bumper-to-bumper distance to the leader, ``math.inf`` when there is none.
    """
    require(gap > 0.0, f"IDM gap must be positive, got {gap}")
    require(v >= 0.0, f"IDM speed must be non-negative, got {v}")
    free = 1.0 - (v / p.desired_speed) ** p.accel_exponent
    interaction = 0.0 if math.isinf(gap) else (desired_gap(v, v_leader, p) / gap) ** 2
    accel = p.max_accel * (free - interaction)
    return min(max(accel, ACCEL_FLOOR), p.max_accel)
