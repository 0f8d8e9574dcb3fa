"""Leader selection, including the virtual leader a cooperative driver adopts to yield."""

import math

from mergelab.utils.error_handling import require

from .idm import idm_acceleration
from .network import Lane, Section
from .state import LaneIndex, SimState
from .vehicle import Vehicle

Leader = tuple[Vehicle, float]


def virtual_ego_leader(v: Vehicle, lane: Lane, state: SimState) -> Leader | None:
    """The unmerged ego as seen by a cooperative right-lane driver it is alongside or ahead of."""
    ego = state.ego
    if ego is None or v.is_ego or lane != Lane.RIGHT or not v.params.cooperative:
        return None
    if ego.lane != Lane.RAMP or ego.maneuver is not None:
        return None
    if state.network.section_of(Lane.RAMP, ego.x) != Section.PARALLEL or ego.x <= v.x:
        return None
    gap = ego.rear - v.x
    return (ego, gap) if gap > 0.0 else None


def leader_in_lane(v: Vehicle, lane: Lane, state: SimState, index: LaneIndex) -> Leader | None:
    physical = index.leader(v, lane)
    best = None if physical is None else (physical, physical.rear - v.x)
    virtual = virtual_ego_leader(v, lane, state)
    if virtual is not None and (best is None or virtual[1] < best[1]):
        return virtual
    return best


def effective_leader(
    v: Vehicle, state: SimState, index: LaneIndex | None = None
) -> tuple[int, float] | None:
    """(leader id, bumper gap) the human vehicle reacts to, or None on a free road."""
    require(not v.is_ego, "effective_leader is defined for human vehicles only")
    found = leader_in_lane(v, v.lane, state, index or LaneIndex(state.vehicles))
    return None if found is None else (found[0].id, found[1])


def accel_behind(v: Vehicle, leader: Leader | None) -> float:
    if leader is None:
        return idm_acceleration(v.speed, v.speed, math.inf, v.params)
    other, gap = leader
    return idm_acceleration(v.speed, other.speed, gap, v.params)
