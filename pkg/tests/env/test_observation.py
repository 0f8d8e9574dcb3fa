import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mergelab.env.observation import (
    CLIP,
    GAP_SCALE,
    OBS_DIM,
    POSITION_SCALE,
    VELOCITY_SCALE,
    observation_bounds,
    observe,
)
from mergelab.sim import engine
from mergelab.sim.network import Lane
from mergelab.sim.state import TrafficParams
from mergelab.utils.error_handling import ContractViolation


def test_empty_highway(make_state, place):
    state = make_state()
    place(state, Lane.RAMP, 100.0, speed=15.0, ego=True)
    obs = observe(state)
    assert obs.v_ego == pytest.approx(15.0 / VELOCITY_SCALE)
    for slot in ("v_t1", "v_t2", "v_l1", "v_l2", "v_ad", "g_t1", "g_t2", "g_l1", "g_l2"):
        assert getattr(obs, slot) == 0.0
    assert obs.x == pytest.approx(175.0 / POSITION_SCALE)
    assert obs.y == 0.0
    assert (obs.c, obs.n) == (0, 3)


def test_single_leader(make_state, place):
    state = make_state()
    place(state, Lane.RIGHT, 135.0, speed=26.0)
    place(state, Lane.RAMP, 100.0, speed=20.0, ego=True)
    obs = observe(state)
    assert obs.g_l1 == pytest.approx(30.0 / GAP_SCALE)
    assert obs.v_l1 == pytest.approx(26.0 / VELOCITY_SCALE)
    assert obs.v_l2 == 0.0
    assert obs.g_l2 == 0.0


def test_two_trailers_and_an_adjacent_vehicle(make_state, place):
    state = make_state()
    t2 = place(state, Lane.RIGHT, 60.0, speed=25.0)
    t1 = place(state, Lane.RIGHT, 98.0, speed=24.0)
    place(state, Lane.RAMP, 100.0, speed=20.0, ego=True)
    obs = observe(state)
    assert obs.v_t1 == pytest.approx(t1.speed / VELOCITY_SCALE)
    assert obs.v_t2 == pytest.approx(t2.speed / VELOCITY_SCALE)
    assert obs.g_t2 == pytest.approx((t1.rear - t2.x) / GAP_SCALE)
    assert obs.v_ad == pytest.approx(t1.speed / VELOCITY_SCALE)
    # overlapping trailer: negative bumper gap
    assert obs.g_t1 == pytest.approx((95.0 - 98.0) / GAP_SCALE)


def test_distant_gaps_are_clipped(make_state, place):
    state = make_state()
    place(state, Lane.RIGHT, 420.0)
    place(state, Lane.RAMP, 80.0, ego=True)
    assert observe(state).g_l1 == CLIP


def test_taper_section_lane_index(make_state, place):
    state = make_state()
    place(state, Lane.RAMP, 30.0, ego=True)
    obs = observe(state)
    assert (obs.c, obs.n) == (0, 1)


def test_after_merge_neighbors_come_from_own_lane(make_state, place):
    state = make_state()
    leader = place(state, Lane.RIGHT, 180.0, speed=25.0)
    merged = place(state, Lane.RIGHT, 140.0, speed=24.0)
    merged.entry_lane = Lane.RAMP
    obs = observe(state, merged)
    assert obs.g_l1 == pytest.approx((leader.rear - merged.x) / GAP_SCALE)
    assert (obs.c, obs.n) == (1, 3)


def test_requires_an_ego(make_state):
    with pytest.raises(ContractViolation):
        observe(make_state())


def test_array_has_fourteen_entries(make_state, place):
    state = make_state()
    place(state, Lane.RAMP, 100.0, ego=True)
    assert observe(state).to_array().shape == (OBS_DIM,)


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000), ticks=st.integers(min_value=0, max_value=150))
def test_observations_stay_in_bounds(seed, ticks):
    state = engine.insert_ego(engine.warm_up(engine.new_state(TrafficParams(), seed), 30.0))
    for _ in range(ticks):
        if state.ego is None:
            break
        engine.step(state, 0.0)
    if state.ego is None:
        return
    low, high = observation_bounds()
    array = observe(state).to_array()
    assert np.all(np.isfinite(array))
    assert np.all(array >= low)
    assert np.all(array <= high)
