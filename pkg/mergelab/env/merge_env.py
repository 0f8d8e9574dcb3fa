"""Episodic merge task on top of the traffic simulator, as a gymnasium environment."""

from dataclasses import asdict, dataclass, replace
from enum import StrEnum
from typing import Any

import gymnasium as gym
import numpy as np
from gymnasium import spaces

from mergelab.config import ScenarioConfig
from mergelab.sim import engine
from mergelab.sim.network import Lane
from mergelab.sim.state import TICKS_PER_SECOND, EventKind, SimState, StepEvent
from mergelab.sim.trajectory import TrajectoryRecorder
from mergelab.sim.vehicle import Vehicle
from mergelab.utils.error_handling import require

from .actions import N_ACTIONS, decode_action
from .observation import OBS_DIM, Observation, observation_bounds, observe
from .reward import RewardConfig, in_merging_zone, merge_gap, reward

LANE_CHANGE_BUFFER = 5.0
POST_MERGE_WINDOW_S = 5.0
SEED_BOUND = 2**62


class Terminal(StrEnum):
    MERGED = "merged"
    CRASHED = "crashed"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class MergeSnapshot:
    """Raw merge quantities frozen at the instant the ego crossed into the right lane."""

    v_ego: float
    v_t1: float
    v_l1: float
    g_t1: float
    g_l1: float
    g0: float
    gc: float
    t1_id: int | None
    l1_id: int | None


@dataclass(frozen=True)
class EpisodeOutcome:
    terminal: Terminal
    ego_id: int
    start_clock: float
    end_clock: float
    merge_clock: float | None
    merge_snapshot: MergeSnapshot | None
    zone_entry_clock: float | None
    events: tuple[StepEvent, ...]
    total_reward: float
    steps: int

    @property
    def merged(self) -> bool:
        return self.terminal == Terminal.MERGED

    @property
    def crashed(self) -> bool:
        return self.terminal == Terminal.CRASHED


def lane_change_allowed(state: SimState, ego: Vehicle, already_accepted: bool) -> bool:
    remaining = state.network.merge_end_x - ego.x
    return (
        not already_accepted
        and ego.lane == Lane.RAMP
        and in_merging_zone(state, ego)
        and remaining >= LANE_CHANGE_BUFFER
    )


def apply_action(
    state: SimState, action: int, already_accepted: bool = False
) -> tuple[SimState, list[StepEvent], bool]:
    """One tick under a discrete action; a rejected lane change drives at 0 m/s².

    Returns whether a lane change has now been accepted in this episode.
    """
    decoded = decode_action(action)
    ego = state.ego
    require(ego is not None, "no ego to apply an action to")
    change = decoded.lane_change and lane_change_allowed(state, ego, already_accepted)
    _, events = engine.step(state, decoded.accel, change)
    return state, events, already_accepted or change


def _terminal(events: list[StepEvent], ego_id: int) -> Terminal | None:
    mine = [e.kind for e in events if e.involves(ego_id)]
    if EventKind.COLLISION in mine:
        return Terminal.CRASHED
    if EventKind.EGO_MERGED in mine:
        return Terminal.MERGED
    if EventKind.EGO_TIMEOUT in mine:
        return Terminal.TIMEOUT
    return None


class MergeEnv(gym.Env):
    """One ego merge per episode.

    ``reset(seed=...)`` always rebuilds the traffic from that seed. ``reset()`` after a merge
    continues the same traffic until the next ego enters the ramp; after a crash or timeout it
    rebuilds from a seed drawn from the environment's own generator.
    """

    metadata = {"render_modes": []}  # noqa: RUF012

    def __init__(
        self,
        scenario: ScenarioConfig | None = None,
        reward_config: RewardConfig | None = None,
        recorder: TrajectoryRecorder | None = None,
    ) -> None:
        super().__init__()
        self.scenario = scenario or ScenarioConfig()
        self.reward_config = reward_config or RewardConfig(phi=self.scenario.svo_phi)
        self.recorder = recorder
        self.action_space = spaces.Discrete(N_ACTIONS)
        low, high = observation_bounds()
        self.observation_space = spaces.Box(low=low, high=high, shape=(OBS_DIM,), dtype=np.float64)

        self.state: SimState | None = None
        self.outcome: EpisodeOutcome | None = None
        self._rebuild = True
        self._ego_id = -1
        self._start_clock = 0.0
        self._events: list[StepEvent] = []
        self._zone_entry: float | None = None
        self._accepted = False
        self._total = 0.0
        self._steps = 0
        self._last_obs = np.zeros(OBS_DIM)

    # -- episode lifecycle -------------------------------------------------

    def _build(self, seed: int) -> None:
        state = engine.new_state(self.scenario.traffic_params(), seed)
        engine.warm_up(state, self.scenario.warmup_s)
        state.events.clear()
        self.state = engine.insert_ego(state)

    def reset(
        self, *, seed: int | None = None, options: dict[str, Any] | None = None
    ) -> tuple[np.ndarray, dict[str, Any]]:
        super().reset(seed=seed)
        if seed is not None:
            self._build(seed)
        elif self._rebuild or self.state is None:
            self._build(int(self.np_random.integers(SEED_BOUND)))
        else:
            engine.run_until_ego(self.state)
            self.state.events.clear()

        ego = self.state.ego
        require(ego is not None, "reset must leave an ego on the ramp")
        self._ego_id = ego.id
        self._start_clock = self.state.clock
        self._events = []
        self._zone_entry = self.state.clock if in_merging_zone(self.state, ego) else None
        self._accepted = False
        self._total = 0.0
        self._steps = 0
        self._rebuild = False
        self.outcome = None
        if self.recorder is not None:
            self.recorder.record(self.state)
        self._last_obs = observe(self.state).to_array()
        return self._last_obs.copy(), {"ego_id": ego.id}

    def step(self, action: int) -> tuple[np.ndarray, float, bool, bool, dict[str, Any]]:
        require(self.state is not None and self.outcome is None, "step called on a finished episode")
        state = self.state
        ego = state.ego
        require(ego is not None and ego.id == self._ego_id, "episode ego is no longer driving")

        _, events, self._accepted = apply_action(state, action, self._accepted)
        state.events.clear()
        self._events.extend(events)
        self._steps += 1
        if self.recorder is not None:
            self.recorder.record(state)

        ego_now = state.vehicle(self._ego_id)
        if self._zone_entry is None and ego_now is not None and in_merging_zone(state, ego_now):
            self._zone_entry = state.clock

        r = reward(state, events, self.reward_config, self._ego_id)
        self._total += r
        terminal = _terminal(events, self._ego_id)
        if ego_now is not None:
            self._last_obs = observe(state, ego_now).to_array()

        info: dict[str, Any] = {"events": events}
        if terminal is not None:
            self.outcome = self._finish(terminal, ego_now)
            info["outcome"] = self.outcome
        terminated = terminal in (Terminal.MERGED, Terminal.CRASHED)
        truncated = terminal == Terminal.TIMEOUT
        return self._last_obs.copy(), r, terminated, truncated, info

    def _finish(self, terminal: Terminal, ego: Vehicle | None) -> EpisodeOutcome:
        state = self.state
        snapshot = None
        merge_clock = None
        if terminal == Terminal.MERGED and ego is not None:
            gap = merge_gap(state, ego)
            snapshot = MergeSnapshot(**asdict(gap))
            merge_clock = state.clock
        self._rebuild = terminal != Terminal.MERGED or not self.scenario.continue_after_merge
        return EpisodeOutcome(
            terminal=terminal,
            ego_id=self._ego_id,
            start_clock=self._start_clock,
            end_clock=state.clock,
            merge_clock=merge_clock,
            merge_snapshot=snapshot,
            zone_entry_clock=self._zone_entry,
            events=tuple(self._events),
            total_reward=self._total,
            steps=self._steps,
        )

    def observe_post_merge(self, seconds: float = POST_MERGE_WINDOW_S) -> EpisodeOutcome:
        """Keep simulating after a merge with the released ego under IDM control.

        Events of the window join the episode log; a collision of the released ego turns the
        outcome into a crash. No new ego enters during the window.
        """
        require(self.outcome is not None, "no finished episode to extend")
        outcome = self.outcome
        if not outcome.merged:
            return outcome
        state = self.state
        window: list[StepEvent] = []
        for _ in range(round(seconds * TICKS_PER_SECOND)):
            _, events = engine.advance_traffic(state, allow_ego_spawn=False)
            state.events.clear()
            window.extend(events)
            if self.recorder is not None:
                self.recorder.record(state)
            if state.vehicle(outcome.ego_id) is None:
                break
        crashed = any(e.kind == EventKind.COLLISION and e.involves(outcome.ego_id) for e in window)
        self.outcome = replace(
            outcome,
            terminal=Terminal.CRASHED if crashed else outcome.terminal,
            merge_snapshot=None if crashed else outcome.merge_snapshot,
            events=outcome.events + tuple(window),
            end_clock=state.clock,
        )
        if crashed:
            self._rebuild = True
        return self.outcome

    def observation(self) -> Observation:
        require(self.state is not None, "environment has not been reset")
        return observe(self.state)
