"""Social value orientation weighted reward.

The ego utility rewards speed and penalizes closing in on the adjacent-lane leader; the
surrounding-vehicle utility rewards merging into large gaps, near their center, without
cutting off the trailing vehicle. The orientation angle blends the two.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass

from pydantic import BaseModel, ConfigDict, Field, field_validator

from mergelab.sim.network import Lane
from mergelab.sim.state import EventKind, LaneIndex, SimState, StepEvent
from mergelab.sim.vehicle import Vehicle
from mergelab.utils.error_handling import require


class RewardConfig(BaseModel):
    phi: float = Field(default=math.pi / 4, ge=0.0, le=math.pi / 2)
    w1: float = 1 / 13
    w2: float = 4 / 13
    w3: float = 15 / 389
    w4: float = 6 / 13
    w5: float = 8 / 13
    d: float = 40.0
    crash_penalty: float = -20.0

    model_config = ConfigDict(frozen=True)

    @field_validator("w1", "w2", "w3", "w4", "w5", "d", "crash_penalty")
    @classmethod
    def finite(cls, value: float) -> float:
        require(math.isfinite(value), f"reward parameters must be finite, got {value}")
        return value


def ego_utility(v_ego: float, v_l1: float, cfg: RewardConfig) -> float:
    return cfg.w1 * v_ego + cfg.w2 * min(v_l1 - v_ego, 0.0)


def sv_utility(
    g0: float,
    gc: float,
    head_gap: float,
    tail_gap: float,
    v_ego: float,
    v_t1: float,
    cfg: RewardConfig,
) -> float:
    require(g0 >= 0.0, f"merge gap g0 must be non-negative, got {g0}")
    effective_gc = 0.0 if head_gap > cfg.d and tail_gap > cfg.d else gc
    return cfg.w3 * g0 - cfg.w4 * effective_gc + cfg.w5 * min(v_ego - v_t1, 0.0)


def social_reward(u_ego: float, u_sv: float, cfg: RewardConfig) -> float:
    return u_ego * math.cos(cfg.phi) + u_sv * math.sin(cfg.phi)


@dataclass(frozen=True)
class MergeGap:
    """Raw quantities of the right-lane gap around the ego, phantoms filled in."""

    v_ego: float
    v_t1: float
    v_l1: float
    g_t1: float
    g_l1: float
    g0: float
    gc: float
    t1_id: int | None
    l1_id: int | None


def right_lane_neighbors(
    state: SimState, ego: Vehicle
) -> tuple[list[Vehicle], list[Vehicle]]:
    """(leaders nearest first, trailers nearest first) in the right lane, by center position."""
    members = [v for v in LaneIndex(state.vehicles).vehicles(Lane.RIGHT) if v.id != ego.id]
    leaders = [v for v in members if v.center > ego.center]
    trailers = [v for v in reversed(members) if v.center <= ego.center]
    return leaders, trailers


def merge_gap(state: SimState, ego: Vehicle) -> MergeGap:
    net = state.network
    leaders, trailers = right_lane_neighbors(state, ego)
    l1 = leaders[0] if leaders else None
    t1 = trailers[0] if trailers else None
    # missing neighbors are phantoms just outside the network moving at the ego's speed
    l1_rear, v_l1 = (net.downstream_x, ego.speed) if l1 is None else (l1.rear, l1.speed)
    t1_front, v_t1 = (net.upstream_x, ego.speed) if t1 is None else (t1.x, t1.speed)
    return MergeGap(
        v_ego=ego.speed,
        v_t1=v_t1,
        v_l1=v_l1,
        g_t1=ego.rear - t1_front,
        g_l1=l1_rear - ego.x,
        g0=l1_rear - t1_front,
        gc=abs(ego.center - (t1_front + l1_rear) / 2.0),
        t1_id=None if t1 is None else t1.id,
        l1_id=None if l1 is None else l1.id,
    )


def in_merging_zone(state: SimState, ego: Vehicle) -> bool:
    return ego.x >= state.network.parallel_start_x


def reward(
    state: SimState, events: Sequence[StepEvent], cfg: RewardConfig, ego_id: int
) -> float:
    """Per-step reward for the ego with the given id, called after the step was applied."""
    if any(e.kind == EventKind.COLLISION and e.involves(ego_id) for e in events):
        return cfg.crash_penalty
    ego = state.vehicle(ego_id)
    if ego is None or not in_merging_zone(state, ego):
        return 0.0
    gap = merge_gap(state, ego)
    return social_reward(
        ego_utility(gap.v_ego, gap.v_l1, cfg),
        sv_utility(gap.g0, gap.gc, gap.g_l1, gap.g_t1, gap.v_ego, gap.v_t1, cfg),
        cfg,
    )
