"""MOBIL-style discretionary lane changes for human drivers."""

from .leaders import accel_behind, leader_in_lane
from .network import HIGHWAY_LANES, Lane
from .state import LaneIndex, SimState
from .vehicle import Vehicle

POLITENESS = 0.5
INCENTIVE_THRESHOLD = 0.2


def _other_lane(lane: Lane) -> Lane:
    return Lane.LEFT if lane == Lane.RIGHT else Lane.RIGHT


def wants_lane_change(v: Vehicle, target: Lane, state: SimState, index: LaneIndex) -> bool:
    new_leader_physical = index.leader(v, target)
    new_follower = index.follower(v, target)

    if new_leader_physical is not None and new_leader_physical.rear - v.x < v.params.min_gap:
        return False
    if new_follower is not None and v.rear - new_follower.x < new_follower.params.min_gap:
        return False
    new_leader = leader_in_lane(v, target, state, index)
    if new_leader is not None and new_leader[1] <= 0.0:
        return False

    # safety: the new follower must not brake harder than comfortable
    new_follower_after = 0.0
    if new_follower is not None:
        new_follower_after = accel_behind(new_follower, (v, v.rear - new_follower.x))
        if new_follower_after < -new_follower.params.comfortable_decel:
            return False

    gain = accel_behind(v, new_leader) - accel_behind(
        v, leader_in_lane(v, v.lane, state, index)
    )
    if new_follower is not None:
        before = accel_behind(
            new_follower,
            None
            if new_leader_physical is None
            else (new_leader_physical, new_leader_physical.rear - new_follower.x),
        )
        gain += POLITENESS * (new_follower_after - before)

    old_follower = index.follower(v, v.lane)
    if old_follower is not None:
        old_leader = index.leader(v, v.lane)
        before = accel_behind(old_follower, (v, v.rear - old_follower.x))
        after = accel_behind(
            old_follower, None if old_leader is None else (old_leader, old_leader.rear - old_follower.x)
        )
        gain += POLITENESS * (after - before)

    return gain > INCENTIVE_THRESHOLD


def human_lane_change(state: SimState) -> SimState:
    """Let every eligible highway driver change lanes at most once; call once per simulated second."""
    index = LaneIndex(state.vehicles)
    candidates = sorted(
        (
            v
            for v in state.vehicles
            if not v.is_ego and v.maneuver is None and v.lane in HIGHWAY_LANES
        ),
        key=lambda v: v.id,
    )
    for v in candidates:
        target = _other_lane(v.lane)
        if wants_lane_change(v, target, state, index):
            v.lane = target
            v.y_offset = 0.0
            index = LaneIndex(state.vehicles)
    return state
