import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mergelab.sim.idm import ACCEL_FLOOR, desired_gap, idm_acceleration
from mergelab.sim.vehicle import DriverParams
from mergelab.utils.error_handling import ContractViolation

PARAMS = DriverParams()

speeds = st.floats(min_value=0.0, max_value=40.0)
gaps = st.one_of(st.floats(min_value=0.01, max_value=1000.0), st.just(math.inf))


def test_free_flow_equilibrium_is_zero():
    assert idm_acceleration(26.0, 26.0, math.inf, PARAMS) == pytest.approx(0.0)


def test_standstill_on_free_road_accelerates_at_max():
    assert idm_acceleration(0.0, 0.0, math.inf, PARAMS) == pytest.approx(PARAMS.max_accel)


def test_double_desired_gap_brakes_at_quarter_max_accel():
    s_star = desired_gap(26.0, 26.0, PARAMS)
    assert s_star == pytest.approx(28.5)
    assert idm_acceleration(26.0, 26.0, 2 * s_star, PARAMS) == pytest.approx(-0.25 * PARAMS.max_accel)


def test_closing_in_fast_hits_the_floor():
    assert idm_acceleration(30.0, 0.0, 1.0, PARAMS) == ACCEL_FLOOR


@pytest.mark.parametrize("gap", [0.0, -1.0])
def test_rejects_non_positive_gap(gap):
    with pytest.raises(ContractViolation):
        idm_acceleration(20.0, 20.0, gap, PARAMS)


def test_rejects_negative_speed():
    with pytest.raises(ContractViolation):
        idm_acceleration(-1.0, 20.0, 10.0, PARAMS)


@given(v=speeds, v_leader=speeds, gap=gaps)
def test_acceleration_is_bounded(v, v_leader, gap):
    a = idm_acceleration(v, v_leader, gap, PARAMS)
    assert ACCEL_FLOOR <= a <= PARAMS.max_accel


@given(v=speeds, v_leader=speeds)
def test_desired_gap_never_below_min_gap(v, v_leader):
    assert desired_gap(v, v_leader, PARAMS) >= PARAMS.min_gap


@given(v=speeds, v_leader=speeds, near=st.floats(min_value=0.5, max_value=100.0))
def test_more_room_never_means_harder_braking(v, v_leader, near):
    assert idm_acceleration(v, v_leader, near * 2, PARAMS) >= idm_acceleration(
        v, v_leader, near, PARAMS
    )
