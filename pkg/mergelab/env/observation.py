"""The 14-entry observation vector."""

from dataclasses import astuple, dataclass

import numpy as np

from mergelab.sim.state import SimState
from mergelab.sim.vehicle import Vehicle
from mergelab.utils.error_handling import require

from .reward import right_lane_neighbors

VELOCITY_SCALE = 30.0
GAP_SCALE = 200.0
POSITION_SCALE = 275.0
CLIP = 1.5
OBS_DIM = 14


@dataclass(frozen=True)
class Observation:
    v_ego: float
    v_t1: float
    v_t2: float
    v_l1: float
    v_l2: float
    v_ad: float
    g_t1: float
    g_t2: float
    g_l1: float
    g_l2: float
    x: float
    y: float
    c: int
    n: int

    def to_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=np.float64)


def observation_bounds() -> tuple[np.ndarray, np.ndarray]:
    low = np.full(OBS_DIM, -CLIP)
    high = np.full(OBS_DIM, CLIP)
    low[-2:], high[-2:] = (0.0, 1.0), (2.0, 3.0)
    return low, high


def _scaled(value: float, scale: float) -> float:
    return float(np.clip(value / scale, -CLIP, CLIP))


def observe(state: SimState, ego: Vehicle | None = None) -> Observation:
    """Observation of the ego (the driving ego unless one is given) against the right lane.

    Before merging the right lane is the adjacent lane; afterwards it is the ego's own lane.
    Missing neighbors contribute 0 to their slots.
    """
    ego = ego if ego is not None else state.ego
    require(ego is not None, "cannot observe a simulation without an ego vehicle")
    net = state.network
    leaders, trailers = right_lane_neighbors(state, ego)
    l1, l2 = (leaders + [None, None])[:2]
    t1, t2 = (trailers + [None, None])[:2]
    alongside = [v for v in leaders + trailers if v.overlaps(ego)]
    adjacent = min(alongside, key=lambda v: (abs(v.center - ego.center), v.id), default=None)

    def speed(v: Vehicle | None) -> float:
        return 0.0 if v is None else _scaled(v.speed, VELOCITY_SCALE)

    def gap(front: Vehicle | None, back: Vehicle | None) -> float:
        if front is None or back is None:
            return 0.0
        return _scaled(front.rear - back.x, GAP_SCALE)

    c, n = net.section_lane_index(ego.lane, ego.x)
    return Observation(
        v_ego=speed(ego),
        v_t1=speed(t1),
        v_t2=speed(t2),
        v_l1=speed(l1),
        v_l2=speed(l2),
        v_ad=speed(adjacent),
        g_t1=gap(ego, t1),
        g_t2=gap(t1, t2),
        g_l1=gap(l1, ego),
        g_l2=gap(l2, l1),
        x=_scaled(net.signed_distance_to_merge_end(ego.x), POSITION_SCALE),
        y=_scaled(ego.y_offset, net.lane_width),
        c=c,
        n=n,
    )
