"""Greedy-policy evaluation runs and the orientation and density sweeps."""

import multiprocessing
from collections.abc import Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np
from expression import Error, Ok, Result, tagged_union

from mergelab.config import DENSITIES, Density, ScenarioConfig, evaluation_scenario, evaluation_seeds
from mergelab.env.merge_env import EpisodeOutcome, MergeEnv
from mergelab.rl.checkpoint import CheckpointError, load_checkpoint, network_from
from mergelab.rl.network import GreedyPolicy
from mergelab.rl.trainer import EvalHook, EvalPoint
from mergelab.sim.trajectory import TrajectoryRecorder

from .records import EvaluationSummary, MergeRecord, record_from_outcome, summarize


def run_episode(
    policy: GreedyPolicy,
    scenario: ScenarioConfig,
    seed: int,
    recorder: TrajectoryRecorder | None = None,
    post_merge: bool = True,
) -> EpisodeOutcome:
    """One greedy episode from a freshly built traffic state, plus the post-merge window."""
    env = MergeEnv(scenario, recorder=recorder)
    obs, _ = env.reset(seed=seed)
    while True:
        obs, _, terminated, truncated, info = env.step(policy.greedy(obs))
        if terminated or truncated:
            break
    return env.observe_post_merge() if post_merge else info["outcome"]


def _evaluate_one(job: tuple[GreedyPolicy, ScenarioConfig, int]) -> tuple[EpisodeOutcome, MergeRecord]:
    policy, scenario, seed = job
    outcome = run_episode(policy, scenario, seed)
    return outcome, record_from_outcome(outcome, seed)


def run_episodes(
    policy: GreedyPolicy, scenario: ScenarioConfig, seeds: Sequence[int], workers: int = 1
) -> list[tuple[EpisodeOutcome, MergeRecord]]:
    """Results in seed order whatever the number of workers."""
    jobs = [(policy, scenario, seed) for seed in seeds]
    if workers <= 1:
        return [_evaluate_one(job) for job in jobs]
    ctx = multiprocessing.get_context("spawn")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        return list(pool.map(_evaluate_one, jobs))


@dataclass(frozen=True)
class EvaluationResult:
    summary: EvaluationSummary
    records: list[MergeRecord]
    outcomes: list[EpisodeOutcome]


def run_evaluation(
    policy: GreedyPolicy,
    density: Density | str,
    n: int,
    seed0: int,
    svo_phi: float = np.pi / 4,
    workers: int = 1,
) -> EvaluationResult:
    scenario = evaluation_scenario(density, svo_phi, seed0)
    results = run_episodes(policy, scenario, evaluation_seeds(seed0, n), workers)
    records = [r for _, r in results]
    return EvaluationResult(summarize(records), records, [o for o, _ in results])


def periodic_evaluation(scenario: ScenarioConfig, episodes: int, seed0: int, workers: int = 1) -> EvalHook:
    """Hook for the training loops: mean episode reward and collision percentage."""

    def hook(policy: GreedyPolicy, timestep: int) -> EvalPoint:
        results = run_episodes(policy, scenario, evaluation_seeds(seed0, episodes), workers)
        outcomes = [o for o, _ in results]
        return EvalPoint(
            mean_reward=float(np.mean([o.total_reward for o in outcomes])),
            collision_pct=100.0 * sum(o.crashed for o in outcomes) / len(outcomes),
            episodes=len(outcomes),
        )

    return hook


@tagged_union
class SweepError:
    tag: Literal["missing_checkpoint", "checkpoint"]
    missing_checkpoint: str | None = None
    checkpoint: CheckpointError | None = None

    @staticmethod
    def MissingCheckpoint(label: str) -> "SweepError":
        return SweepError(tag="missing_checkpoint", missing_checkpoint=label)

    @staticmethod
    def Checkpoint(error: CheckpointError) -> "SweepError":
        return SweepError(tag="checkpoint", checkpoint=error)

    def __str__(self) -> str:
        match self:
            case SweepError(tag="missing_checkpoint"):
                return f"no checkpoint for {self.missing_checkpoint}"
            case SweepError(tag="checkpoint"):
                return str(self.checkpoint)
            case _:
                return "Unknown sweep error"


@dataclass(frozen=True)
class SweepColumn:
    label: str
    result: Result[EvaluationSummary, SweepError]


def load_policy(path: Path) -> Result[tuple[GreedyPolicy, float], CheckpointError]:
    """Greedy policy and the orientation it was trained with."""
    return load_checkpoint(path).map(lambda doc: (network_from(doc), doc.svo_phi))


def _column(
    label: str, path: Path | None, density: Density | str, n: int, seed0: int, workers: int
) -> SweepColumn:
    if path is None or not path.exists():
        return SweepColumn(label, Error(SweepError.MissingCheckpoint(label)))
    loaded = load_policy(path)
    if loaded.is_error():
        return SweepColumn(label, Error(SweepError.Checkpoint(loaded.error)))
    policy, phi = loaded.ok
    summary = run_evaluation(policy, density, n, seed0, phi, workers).summary
    return SweepColumn(label, Ok(summary))


def svo_sweep(
    checkpoints: Mapping[str, Path | None],
    density: Density | str = Density.MEDIUM,
    n: int = 100,
    seed0: int = 0,
    workers: int = 1,
) -> list[SweepColumn]:
    """One column per orientation label; a missing checkpoint fails only its own column."""
    return [_column(label, path, density, n, seed0, workers) for label, path in checkpoints.items()]


def density_sweep(
    checkpoint: Path, n: int = 100, seed0: int = 0, workers: int = 1
) -> list[SweepColumn]:
    return [_column(d.value, checkpoint, d, n, seed0, workers) for d in DENSITIES]
