"""Discrete-time stepping of the merge scenario at 10 Hz."""

from dataclasses import dataclass

import numpy as np

from mergelab.utils.error_handling import SimulatorDefect, require

from .idm import idm_acceleration
from .leaders import accel_behind, leader_in_lane
from .mobil import human_lane_change
from .network import Lane, RoadNetwork, build_network
from .state import (
    DT,
    LANE_END_ID,
    TICKS_PER_SECOND,
    EventKind,
    LaneIndex,
    SimState,
    StepEvent,
    TrafficParams,
)
from .vehicle import DriverParams, LaneChange, Vehicle, sample_desired_speed

ENTRY_SPEED = 26.0
EGO_ENTRY_SPEED = 13.0
EGO_ACCEL_LIMIT = 3.0
HARD_BRAKE_DECEL = 3.0
SPAWN_CLEARANCE = 2.0


@dataclass(frozen=True)
class EgoCommand:
    accel: float
    lane_change: bool = False


def new_state(
    traffic: TrafficParams, seed: int | np.random.SeedSequence, network: RoadNetwork | None = None
) -> SimState:
    return SimState(
        network=network or build_network(),
        traffic=traffic,
        rng=np.random.default_rng(seed),
    )


def _emit(state: SimState, kind: EventKind, *vehicle_ids: int) -> None:
    state.events.append(StepEvent(kind=kind, vehicle_ids=tuple(vehicle_ids), clock=state.clock))


def insert_ego(state: SimState) -> SimState:
    """Place a new ego at the ramp entry unless one is already driving."""
    if state.ego_id is not None:
        return state
    net = state.network
    ego = Vehicle(
        id=state.allocate_id(),
        lane=Lane.RAMP,
        x=net.ramp_entry_x,
        speed=EGO_ENTRY_SPEED,
        params=DriverParams(),
        is_ego=True,
        was_ego=True,
        entry_lane=Lane.RAMP,
        lane_width=net.lane_width,
    )
    state.vehicles.append(ego)
    state.ego_id = ego.id
    state.ego_spawn_tick = state.tick
    _emit(state, EventKind.SPAWN, ego.id)
    return state


def _safe_insertion(ahead: Vehicle, entry: float, params: DriverParams) -> bool:
    """Room for min_gap plus clearance, and no harder than comfortable braking on arrival."""
    gap = ahead.rear - entry
    if gap < params.min_gap + SPAWN_CLEARANCE:
        return False
    return idm_acceleration(ENTRY_SPEED, ahead.speed, gap, params) >= -params.comfortable_decel


def spawn_step(state: SimState, allow_ego: bool = True) -> SimState:
    """Bernoulli arrivals at the upstream boundary, one draw per highway lane per second."""
    traffic, net, rng = state.traffic, state.network, state.rng
    index = LaneIndex(state.vehicles)
    entry = net.upstream_x
    for lane, p in ((Lane.RIGHT, traffic.p_right), (Lane.LEFT, traffic.p_left)):
        if rng.random() >= p:
            continue
        desired = sample_desired_speed(rng)
        cooperative = lane == Lane.LEFT or rng.random() >= traffic.uncooperative_fraction
        params = DriverParams(desired_speed=desired, cooperative=cooperative)
        ahead = index.nearest_ahead_of(entry, lane)
        if ahead is not None and not _safe_insertion(ahead, entry, params):
            continue
        vehicle = Vehicle(
            id=state.allocate_id(),
            lane=lane,
            x=entry,
            speed=ENTRY_SPEED,
            params=params,
            entry_lane=lane,
            lane_width=net.lane_width,
        )
        state.vehicles.append(vehicle)
        _emit(state, EventKind.SPAWN, vehicle.id)
    if allow_ego and traffic.spawn_ego and state.ego_id is None:
        insert_ego(state)
    return state


def _accelerations(state: SimState, command: EgoCommand | None) -> dict[int, float]:
    index = LaneIndex(state.vehicles)
    accels: dict[int, float] = {}
    for v in state.vehicles:
        if v.is_ego:
            requested = 0.0 if command is None else command.accel
            accels[v.id] = float(np.clip(requested, -EGO_ACCEL_LIMIT, EGO_ACCEL_LIMIT))
        else:
            accels[v.id] = accel_behind(v, leader_in_lane(v, v.lane, state, index))
    return accels


def _integrate(state: SimState, accels: dict[int, float]) -> None:
    for v in state.vehicles:
        a = accels[v.id]
        speed = v.speed + a * DT
        if speed < 0.0:
            v.last_accel = -v.speed / DT
            speed = 0.0
        else:
            v.last_accel = a
        v.speed = speed
        v.x += speed * DT


def _release_ego(state: SimState, ego: Vehicle) -> None:
    ego.is_ego = False
    state.ego_id = None


def _advance_maneuvers(state: SimState) -> None:
    width = state.network.lane_width
    for v in state.vehicles:
        m = v.maneuver
        if m is None:
            continue
        m.step += 1
        if m.crossed and v.lane != m.target:
            v.lane = m.target
            if v.is_ego:
                _emit(state, EventKind.EGO_MERGED, v.id)
                _release_ego(state, v)
        if m.done:
            v.maneuver = None
            v.y_offset = 0.0
        else:
            travel = m.displacement(width)
            v.y_offset = travel if v.lane == m.origin else travel - width


def _remove(state: SimState, ids: set[int]) -> None:
    if state.ego_id in ids:
        state.ego_id = None
    state.vehicles = [v for v in state.vehicles if v.id not in ids]


def _detect_collisions(state: SimState) -> None:
    index = LaneIndex(state.vehicles)
    crashed: set[int] = set()
    for lane in Lane:
        members = index.vehicles(lane)
        for follower, leader in zip(members, members[1:], strict=False):
            if leader.rear - follower.x >= 0.0:
                continue
            if not (follower.was_ego or leader.was_ego):
                raise SimulatorDefect(
                    f"human vehicles {follower.id} and {leader.id} collided at t={state.clock:.1f}s"
                )
            _emit(state, EventKind.COLLISION, follower.id, leader.id)
            crashed.update(v.id for v in (follower, leader) if v.was_ego)
    end = state.network.merge_end_x
    for v in index.vehicles(Lane.RAMP):
        if v.lane == Lane.RAMP and v.maneuver is None and v.x > end and v.id not in crashed:
            _emit(state, EventKind.COLLISION, v.id, LANE_END_ID)
            crashed.add(v.id)
    _remove(state, crashed)


def _detect_hard_brakes(state: SimState) -> None:
    for v in state.vehicles:
        if v.last_accel <= -HARD_BRAKE_DECEL:
            _emit(state, EventKind.HARD_BRAKE, v.id)


def _detect_timeout(state: SimState) -> None:
    ego = state.ego
    limit = round(state.traffic.timeout_s * TICKS_PER_SECOND)
    if ego is not None and state.tick - state.ego_spawn_tick >= limit:
        _emit(state, EventKind.EGO_TIMEOUT, ego.id)
        _remove(state, {ego.id})


def _advance(
    state: SimState, command: EgoCommand | None, allow_ego_spawn: bool = True
) -> tuple[SimState, list[StepEvent]]:
    first_event = len(state.events)
    accels = _accelerations(state, command)
    _integrate(state, accels)
    state.tick += 1

    ego = state.ego
    if (
        ego is not None
        and command is not None
        and command.lane_change
        and ego.maneuver is None
        and ego.lane == Lane.RAMP
    ):
        ego.maneuver = LaneChange(origin=Lane.RAMP, target=Lane.RIGHT)
    _advance_maneuvers(state)

    _detect_collisions(state)
    _detect_hard_brakes(state)
    _detect_timeout(state)

    if state.tick % TICKS_PER_SECOND == 0:
        human_lane_change(state)
        spawn_step(state, allow_ego=allow_ego_spawn)

    downstream = state.network.downstream_x
    state.vehicles = [v for v in state.vehicles if v.rear <= downstream]
    return state, state.events[first_event:]


def step(
    state: SimState, ego_accel: float, ego_lane_change: bool = False
) -> tuple[SimState, list[StepEvent]]:
    """Advance one 0.1 s tick with the ego under external control.

    No new ego enters during such a tick, even when this one merged or crashed in it.
    """
    require(state.ego is not None, "cannot step a simulation without an ego vehicle")
    return _advance(state, EgoCommand(ego_accel, ego_lane_change), allow_ego_spawn=False)


def advance_traffic(
    state: SimState, allow_ego_spawn: bool = True
) -> tuple[SimState, list[StepEvent]]:
    """Advance one tick while no ego is under external control."""
    require(state.ego is None, "advance_traffic would leave the ego uncontrolled")
    return _advance(state, None, allow_ego_spawn)


def warm_up(state: SimState, seconds: float) -> SimState:
    """Human-only flow so the highway is populated before an ego enters."""
    for _ in range(round(seconds * TICKS_PER_SECOND)):
        advance_traffic(state, allow_ego_spawn=False)
    return state


def run_until_ego(state: SimState, max_ticks: int = TICKS_PER_SECOND) -> SimState:
    """Advance until the next spawn tick inserts an ego."""
    for _ in range(max_ticks):
        if state.ego_id is not None:
            break
        advance_traffic(state)
    if state.ego_id is None:
        insert_ego(state)
    return state
