"""Per-tick vehicle snapshots and their CSV rendering."""

import csv
import io
from dataclasses import dataclass, field

from .state import SimState

TRAJECTORY_FORMAT_VERSION = 1
TRAJECTORY_COLUMNS = ("clock", "id", "lane", "x", "y_offset", "speed", "accel")


@dataclass(frozen=True)
class TrajectoryRow:
    clock: float
    id: int
    lane: int
    x: float
    y_offset: float
    speed: float
    accel: float


@dataclass
class TrajectoryRecorder:
    """Collects one row per vehicle per recorded tick."""

    rows: list[TrajectoryRow] = field(default_factory=list)

    def record(self, state: SimState) -> None:
        for v in sorted(state.vehicles, key=lambda v: v.id):
            self.rows.append(
                TrajectoryRow(
                    clock=state.clock,
                    id=v.id,
                    lane=int(v.lane),
                    x=v.x,
                    y_offset=v.lateral,
                    speed=v.speed,
                    accel=v.last_accel,
                )
            )

    def rows_for(self, vehicle_id: int) -> list[TrajectoryRow]:
        return [r for r in self.rows if r.id == vehicle_id]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(TRAJECTORY_COLUMNS)
        for r in self.rows:
            writer.writerow(
                [
                    f"{r.clock:.1f}",
                    r.id,
                    r.lane,
                    f"{r.x:.6f}",
                    f"{r.y_offset:.6f}",
                    f"{r.speed:.6f}",
                    f"{r.accel:.6f}",
                ]
            )
        return buffer.getvalue()
