"""Simulator state, event records and the per-lane occupancy index."""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np

from .network import Lane, RoadNetwork
from .vehicle import Vehicle

DT = 0.1
TICKS_PER_SECOND = 10
LANE_END_ID = -1


class EventKind(StrEnum):
    COLLISION = "collision"
    EGO_MERGED = "ego_merged"
    EGO_TIMEOUT = "ego_timeout"
    SPAWN = "spawn"
    HARD_BRAKE = "hard_brake"


@dataclass(frozen=True)
class StepEvent:
    kind: EventKind
    vehicle_ids: tuple[int, ...]
    clock: float

    def involves(self, vehicle_id: int) -> bool:
        return vehicle_id in self.vehicle_ids


@dataclass(frozen=True)
class TrafficParams:
    """Inflow and behavior settings the simulator needs from a scenario."""

    p_right: float = 0.3
    p_left: float = 0.1
    uncooperative_fraction: float = 0.5
    spawn_ego: bool = True
    timeout_s: float = 150.0


@dataclass
class SimState:
    network: RoadNetwork
    traffic: TrafficParams
    rng: np.random.Generator
    vehicles: list[Vehicle] = field(default_factory=list)
    tick: int = 0
    events: list[StepEvent] = field(default_factory=list)
    next_id: int = 0
    ego_id: int | None = None
    ego_spawn_tick: int = 0

    @property
    def clock(self) -> float:
        return self.tick * DT

    @property
    def ego(self) -> Vehicle | None:
        if self.ego_id is None:
            return None
        return self.vehicle(self.ego_id)

    def vehicle(self, vehicle_id: int) -> Vehicle | None:
        return next((v for v in self.vehicles if v.id == vehicle_id), None)

    def allocate_id(self) -> int:
        vid = self.next_id
        self.next_id += 1
        return vid

    def humans(self) -> list[Vehicle]:
        return [v for v in self.vehicles if not v.is_ego]


class LaneIndex:
    """Vehicles per lane ordered by front-bumper position (ties broken by id)."""

    def __init__(self, vehicles: list[Vehicle]) -> None:
        self._lanes: dict[Lane, list[Vehicle]] = {lane: [] for lane in Lane}
        for v in vehicles:
            for lane in v.occupied_lanes():
                self._lanes[lane].append(v)
        for members in self._lanes.values():
            members.sort(key=lambda v: (v.x, v.id))
        self._keys = {
            lane: [(v.x, v.id) for v in members] for lane, members in self._lanes.items()
        }

    def vehicles(self, lane: Lane) -> list[Vehicle]:
        return self._lanes[lane]

    def leader(self, v: Vehicle, lane: Lane) -> Vehicle | None:
        members = self._lanes[lane]
        i = bisect_right(self._keys[lane], (v.x, v.id))
        return members[i] if i < len(members) else None

    def follower(self, v: Vehicle, lane: Lane) -> Vehicle | None:
        members = self._lanes[lane]
        j = bisect_left(self._keys[lane], (v.x, v.id)) - 1
        return members[j] if j >= 0 else None

    def nearest_ahead_of(self, x: float, lane: Lane) -> Vehicle | None:
        """First vehicle whose front bumper is at or beyond x."""
        members = self._lanes[lane]
        i = bisect_left(self._keys[lane], (x, -1))
        return members[i] if i < len(members) else None
