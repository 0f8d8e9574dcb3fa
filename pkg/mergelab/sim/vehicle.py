"""Vehicles and their driver parameters."""

from dataclasses import dataclass, field

import numpy as np

from .network import Lane

VEHICLE_LENGTH = 5.0
DESIRED_SPEED_MEAN = 26.0
DESIRED_SPEED_STD = 0.1
LANE_CHANGE_STEPS = 20


@dataclass(frozen=True)
class DriverParams:
    """IDM parameters of one driver plus whether it yields to a merging ego."""

    desired_speed: float = DESIRED_SPEED_MEAN
    max_accel: float = 2.6
    comfortable_decel: float = 4.5
    time_headway: float = 1.0
    min_gap: float = 2.5
    accel_exponent: float = 4.0
    cooperative: bool = True


def sample_desired_speed(rng: np.random.Generator) -> float:
    """Normal(26, 0.1) truncated to positive values by resampling."""
    while True:
        speed = float(rng.normal(DESIRED_SPEED_MEAN, DESIRED_SPEED_STD))
        if speed > 0.0:
            return speed


@dataclass
class LaneChange:
    """Lateral maneuver in progress; the vehicle occupies both lanes until it completes."""

    origin: Lane
    target: Lane
    step: int = 0
    total_steps: int = LANE_CHANGE_STEPS

    @property
    def crossed(self) -> bool:
        return 2 * self.step >= self.total_steps

    @property
    def done(self) -> bool:
        return self.step >= self.total_steps

    def displacement(self, lane_width: float) -> float:
        """Cosine-eased lateral travel from the origin lane center."""
        phase = np.pi * self.step / self.total_steps
        return float(lane_width * (1.0 - np.cos(phase)) / 2.0)


@dataclass
class Vehicle:
    id: int
    lane: Lane
    x: float
    speed: float
    params: DriverParams
    length: float = VEHICLE_LENGTH
    is_ego: bool = False
    y_offset: float = 0.0
    last_accel: float = 0.0
    entry_lane: Lane = Lane.RIGHT
    lane_width: float = 3.2
    was_ego: bool = False
    maneuver: LaneChange | None = field(default=None)

    @property
    def rear(self) -> float:
        return self.x - self.length

    @property
    def center(self) -> float:
        return self.x - self.length / 2.0

    @property
    def lateral(self) -> float:
        """Lateral position relative to the center of the lane the vehicle entered on."""
        return (int(self.lane) - int(self.entry_lane)) * self.lane_width + self.y_offset

    def occupied_lanes(self) -> tuple[Lane, ...]:
        if self.maneuver is None:
            return (self.lane,)
        return tuple(sorted({self.lane, self.maneuver.origin, self.maneuver.target}))

    def overlaps(self, other: "Vehicle") -> bool:
        return self.rear < other.x and other.rear < self.x
