"""Road geometry: a two-lane highway with a taper-style ramp feeding a parallel merging lane.

All positions share one longitudinal axis. The ramp entry sits at x = 0, the taper runs to
x = 75, the parallel lane runs alongside the right highway lane to ``merge_end_x`` = 275, and
the highway extends 150 m upstream of the parallel section and 150 m downstream of it.
"""

from dataclasses import dataclass
from enum import IntEnum, StrEnum


class Lane(IntEnum):
    """Physical lanes, numbered from the right."""

    RAMP = 0
    RIGHT = 1
    LEFT = 2


HIGHWAY_LANES = (Lane.RIGHT, Lane.LEFT)


class Section(StrEnum):
    UPSTREAM = "upstream"
    TAPER = "taper"
    PARALLEL = "parallel"
    DOWNSTREAM = "downstream"


@dataclass(frozen=True)
class RoadNetwork:
    taper_length: float = 75.0
    parallel_length: float = 200.0
    upstream_highway_length: float = 150.0
    downstream_highway_length: float = 150.0
    highway_lane_count: int = 2
    lane_width: float = 3.2
    ramp_entry_x: float = 0.0

    @property
    def parallel_start_x(self) -> float:
        return self.ramp_entry_x + self.taper_length

    @property
    def merge_end_x(self) -> float:
        return self.parallel_start_x + self.parallel_length

    @property
    def upstream_x(self) -> float:
        """Highway entry boundary."""
        return self.parallel_start_x - self.upstream_highway_length

    @property
    def downstream_x(self) -> float:
        """Highway exit boundary."""
        return self.merge_end_x + self.downstream_highway_length

    def section_of(self, lane: Lane, x: float) -> Section:
        if lane == Lane.RAMP:
            return Section.TAPER if x < self.parallel_start_x else Section.PARALLEL
        if x < self.parallel_start_x:
            return Section.UPSTREAM
        return Section.PARALLEL if x <= self.merge_end_x else Section.DOWNSTREAM

    def section_lane_index(self, lane: Lane, x: float) -> tuple[int, int]:
        """(index of lane counted from the rightmost lane of its section, lanes in section)."""
        match self.section_of(lane, x):
            case Section.TAPER:
                return 0, 1
            case Section.PARALLEL:
                return int(lane), self.highway_lane_count + 1
            case _:
                return int(lane) - 1, self.highway_lane_count

    def signed_distance_to_merge_end(self, x: float) -> float:
        """Positive while the position is upstream of the end of the parallel lane."""
        return self.merge_end_x - x

    def in_merging_zone(self, x: float) -> bool:
        return self.parallel_start_x <= x <= self.merge_end_x


def build_network() -> RoadNetwork:
    """The fixed geometry every scenario runs on."""
    return RoadNetwork()
