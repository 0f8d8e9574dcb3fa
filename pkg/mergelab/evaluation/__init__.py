"""Evaluation of trained policies: merge metrics, summaries and sweeps."""

from mergelab.config import DENSITIES, Density, DensityConfig

from .harness import (
    EvaluationResult,
    SweepColumn,
    SweepError,
    density_sweep,
    load_policy,
    periodic_evaluation,
    run_episode,
    run_evaluation,
    svo_sweep,
)
from .metrics import detect_conflict, gap_ratio, ttc_below, ttc_leading, ttc_trailing
from .records import (
    MERGE_CSV_FORMAT_VERSION,
    EvaluationSummary,
    MergeRecord,
    record_from_outcome,
    records_from_csv,
    records_to_csv,
    summarize,
)

__all__ = [
    "DENSITIES",
    "MERGE_CSV_FORMAT_VERSION",
    "Density",
    "DensityConfig",
    "EvaluationResult",
    "EvaluationSummary",
    "MergeRecord",
    "SweepColumn",
    "SweepError",
    "density_sweep",
    "detect_conflict",
    "gap_ratio",
    "load_policy",
    "periodic_evaluation",
    "record_from_outcome",
    "records_from_csv",
    "records_to_csv",
    "run_episode",
    "run_evaluation",
    "summarize",
    "svo_sweep",
    "ttc_below",
    "ttc_leading",
    "ttc_trailing",
]
