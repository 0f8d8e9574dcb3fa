"""Common test configurations and fixtures."""

from collections.abc import Callable

import numpy as np
import pytest
from rich.console import Console

from mergelab.sim.network import Lane, build_network
from mergelab.sim.state import SimState, TrafficParams
from mergelab.sim.vehicle import DriverParams, Vehicle
from mergelab.tui import DisplayContext

QUIET_TRAFFIC = TrafficParams(p_right=0.0, p_left=0.0, spawn_ego=False)

StateFactory = Callable[..., SimState]
VehicleFactory = Callable[..., Vehicle]


@pytest.fixture
def make_state() -> StateFactory:
    """Empty network with no arrivals unless traffic says otherwise."""

    def factory(traffic: TrafficParams = QUIET_TRAFFIC, seed: int = 0) -> SimState:
        return SimState(network=build_network(), traffic=traffic, rng=np.random.default_rng(seed))

    return factory


@pytest.fixture
def place() -> VehicleFactory:
    """Add a vehicle to a state; ``ego=True`` makes it the driving ego on the given lane."""

    def factory(
        state: SimState,
        lane: Lane,
        x: float,
        speed: float = 26.0,
        ego: bool = False,
        cooperative: bool = True,
        desired_speed: float = 26.0,
    ) -> Vehicle:
        vehicle = Vehicle(
            id=state.allocate_id(),
            lane=lane,
            x=x,
            speed=speed,
            params=DriverParams(desired_speed=desired_speed, cooperative=cooperative),
            is_ego=ego,
            was_ego=ego,
            entry_lane=lane,
            lane_width=state.network.lane_width,
        )
        state.vehicles.append(vehicle)
        if ego:
            state.ego_id = vehicle.id
            state.ego_spawn_tick = state.tick
        return vehicle

    return factory


@pytest.fixture
def mock_console(mocker):
    console = mocker.Mock(spec=Console)
    console.print = mocker.Mock(return_value=None)
    return console


@pytest.fixture
def display_ctx(mock_console) -> DisplayContext:
    return DisplayContext(console=mock_console)
