"""Surrogate safety and social metrics of a single merge."""

import math
from collections.abc import Iterable

from mergelab.env.merge_env import EpisodeOutcome
from mergelab.sim.state import LANE_END_ID, EventKind, StepEvent
from mergelab.utils.error_handling import require

TTC_THRESHOLD_S = 10.0
GAP_RATIO_THRESHOLD = 0.5
CONFLICT_WINDOW_S = 5.0


def _ttc(gap: float, closing_speed: float) -> float:
    if closing_speed == 0.0:
        return math.inf
    return gap / closing_speed


def ttc_trailing(g_t1: float, v_t1: float, v_ego: float) -> float:
    """Time for the trailing vehicle to close the gap; non-positive means it never does."""
    return _ttc(g_t1, v_t1 - v_ego)


def ttc_leading(g_l1: float, v_ego: float, v_l1: float) -> float:
    return _ttc(g_l1, v_ego - v_l1)


def ttc_below(ttc: float, threshold: float = TTC_THRESHOLD_S) -> bool:
    return 0.0 < ttc < threshold


def gap_ratio(g_c: float, g_0: float) -> float:
    require(g_0 > 0.0, f"gap size must be positive, got {g_0}")
    return g_c / g_0


def hard_brake_in_window(
    events: Iterable[StepEvent], parties: set[int], start: float, end: float
) -> bool:
    return any(
        e.kind == EventKind.HARD_BRAKE
        and start <= e.clock <= end
        and bool(parties.intersection(e.vehicle_ids))
        for e in events
    )


def conflict_parties(outcome: EpisodeOutcome) -> set[int]:
    parties = {outcome.ego_id}
    snapshot = outcome.merge_snapshot
    if snapshot is not None:
        parties.update(i for i in (snapshot.t1_id, snapshot.l1_id) if i is not None)
    for e in outcome.events:
        if e.kind == EventKind.COLLISION and e.involves(outcome.ego_id):
            parties.update(i for i in e.vehicle_ids if i != LANE_END_ID)
    return parties


def detect_conflict(outcome: EpisodeOutcome) -> bool:
    """Hard braking by a party to the merge between zone entry and 5 s after the merge."""
    if outcome.zone_entry_clock is None:
        return False
    end = (
        outcome.merge_clock + CONFLICT_WINDOW_S
        if outcome.merge_clock is not None
        else outcome.end_clock
    )
    return hard_brake_in_window(
        outcome.events, conflict_parties(outcome), outcome.zone_entry_clock, end
    )
