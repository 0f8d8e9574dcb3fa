"""Microscopic traffic simulation of a highway with a parallel-lane on-ramp."""

from .engine import (
    advance_traffic,
    insert_ego,
    new_state,
    run_until_ego,
    spawn_step,
    step,
    warm_up,
)
from .idm import desired_gap, idm_acceleration
from .leaders import effective_leader
from .mobil import human_lane_change
from .network import HIGHWAY_LANES, Lane, RoadNetwork, Section, build_network
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
from .trajectory import TrajectoryRecorder
from .vehicle import DriverParams, Vehicle

__all__ = [
    "DT",
    "HIGHWAY_LANES",
    "LANE_END_ID",
    "TICKS_PER_SECOND",
    "DriverParams",
    "EventKind",
    "Lane",
    "LaneIndex",
    "RoadNetwork",
    "Section",
    "SimState",
    "StepEvent",
    "TrafficParams",
    "TrajectoryRecorder",
    "Vehicle",
    "advance_traffic",
    "build_network",
    "desired_gap",
    "effective_leader",
    "human_lane_change",
    "idm_acceleration",
    "insert_ego",
    "new_state",
    "run_until_ego",
    "spawn_step",
    "step",
    "warm_up",
]
