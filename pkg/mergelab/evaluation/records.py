"""Per-merge records, their CSV form, and the evaluation summary."""

import csv
import io
import math

from pydantic import BaseModel, ConfigDict

from mergelab.env.merge_env import EpisodeOutcome, Terminal

from .metrics import (
    GAP_RATIO_THRESHOLD,
    detect_conflict,
    gap_ratio,
    ttc_below,
    ttc_leading,
    ttc_trailing,
)

MERGE_CSV_FORMAT_VERSION = 1
MERGE_CSV_COLUMNS = (
    "episode_seed",
    "outcome",
    "merge_velocity",
    "ttc_l1",
    "ttc_t1",
    "gap_ratio",
    "conflict",
)


class MergeRecord(BaseModel):
    episode_seed: int
    outcome: Terminal
    merge_velocity: float | None = None
    ttc_l1: float | None = None
    ttc_t1: float | None = None
    gap_ratio: float | None = None
    conflict: bool = False

    model_config = ConfigDict(frozen=True)


class EvaluationSummary(BaseModel):
    n_episodes: int
    n_merges: int
    n_timeouts: int
    collision_pct: float
    conflict_pct: float
    mean_merge_velocity: float | None
    pct_ttc_l1_below_10s: float | None
    pct_ttc_t1_below_10s: float | None
    pct_gap_ratio_above_half: float | None

    model_config = ConfigDict(frozen=True)


def record_from_outcome(outcome: EpisodeOutcome, episode_seed: int) -> MergeRecord:
    conflict = detect_conflict(outcome)
    s = outcome.merge_snapshot
    if outcome.terminal != Terminal.MERGED or s is None:
        return MergeRecord(episode_seed=episode_seed, outcome=outcome.terminal, conflict=conflict)
    return MergeRecord(
        episode_seed=episode_seed,
        outcome=outcome.terminal,
        merge_velocity=s.v_ego,
        ttc_l1=ttc_leading(s.g_l1, s.v_ego, s.v_l1),
        ttc_t1=ttc_trailing(s.g_t1, s.v_t1, s.v_ego),
        gap_ratio=gap_ratio(s.gc, s.g0),
        conflict=conflict,
    )


def _pct(count: int, total: int) -> float:
    return 100.0 * count / total


def summarize(records: list[MergeRecord]) -> EvaluationSummary:
    """Collisions and conflicts over all episodes; merge metrics over merged episodes only."""
    n = len(records)
    merged = [r for r in records if r.outcome == Terminal.MERGED]
    m = len(merged)
    crashed = sum(r.outcome == Terminal.CRASHED for r in records)
    timeouts = sum(r.outcome == Terminal.TIMEOUT for r in records)
    conflicts = sum(r.conflict for r in records)

    def over_merged(count: int) -> float | None:
        return _pct(count, m) if m else None

    return EvaluationSummary(
        n_episodes=n,
        n_merges=m,
        n_timeouts=timeouts,
        collision_pct=_pct(crashed, n) if n else 0.0,
        conflict_pct=_pct(conflicts, n) if n else 0.0,
        mean_merge_velocity=sum(r.merge_velocity for r in merged) / m if m else None,
        pct_ttc_l1_below_10s=over_merged(sum(ttc_below(r.ttc_l1) for r in merged)),
        pct_ttc_t1_below_10s=over_merged(sum(ttc_below(r.ttc_t1) for r in merged)),
        pct_gap_ratio_above_half=over_merged(
            sum(r.gap_ratio > GAP_RATIO_THRESHOLD for r in merged)
        ),
    )


def _cell(value: float | None) -> str:
    if value is None:
        return ""
    return "inf" if math.isinf(value) and value > 0 else repr(value)


def records_to_csv(records: list[MergeRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(MERGE_CSV_COLUMNS)
    for r in records:
        writer.writerow(
            [
                r.episode_seed,
                r.outcome.value,
                _cell(r.merge_velocity),
                _cell(r.ttc_l1),
                _cell(r.ttc_t1),
                _cell(r.gap_ratio),
                int(r.conflict),
            ]
        )
    return buffer.getvalue()


def records_from_csv(text: str) -> list[MergeRecord]:
    def number(cell: str) -> float | None:
        return None if cell == "" else float(cell)

    return [
        MergeRecord(
            episode_seed=int(row["episode_seed"]),
            outcome=Terminal(row["outcome"]),
            merge_velocity=number(row["merge_velocity"]),
            ttc_l1=number(row["ttc_l1"]),
            ttc_t1=number(row["ttc_t1"]),
            gap_ratio=number(row["gap_ratio"]),
            conflict=row["conflict"] == "1",
        )
        for row in csv.DictReader(io.StringIO(text))
    ]
