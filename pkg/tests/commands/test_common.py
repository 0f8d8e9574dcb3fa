from pathlib import Path

import pytest
from expression import Error, Ok

from mergelab.commands.common import (
    SUMMARY_ROWS,
    checkpoint_paths,
    log_sink,
    or_raise,
    read_log,
    require_checkpoint,
    show_summary_table,
    start_log,
    summary_rows,
)
from mergelab.commands.sweep import SVO_LABELS, svo_columns, sweep_document
from mergelab.config import RunConfig
from mergelab.evaluation.harness import SweepColumn, SweepError
from mergelab.evaluation.records import EvaluationSummary
from mergelab.rl.trainer import EvalRecord, UpdateRecord
from mergelab.utils.error_handling import CommandError

SUMMARY = EvaluationSummary(
    n_episodes=100,
    n_merges=98,
    n_timeouts=1,
    collision_pct=1.0,
    conflict_pct=4.0,
    mean_merge_velocity=21.04,
    pct_ttc_l1_below_10s=0.0,
    pct_ttc_t1_below_10s=5.1,
    pct_gap_ratio_above_half=None,
)


def update(timestep: int) -> UpdateRecord:
    return UpdateRecord(
        timestep=timestep, update=timestep // 8, episodes=0, mean_episode_reward=None, collisions=0, loss=0.0, value_loss=0.0
    )


def test_checkpoint_paths():
    numbered, latest = checkpoint_paths(Path("runs/a"), 4096)
    assert numbered == Path("runs/a/checkpoints/ckpt_4096.json")
    assert latest == Path("runs/a/checkpoint.json")


def test_or_raise_unwraps_ok():
    assert or_raise(Ok(7)) == 7


def test_or_raise_raises_the_command_error():
    error = CommandError("io_error", "disk full")
    with pytest.raises(CommandError) as excinfo:
        or_raise(Error(error))
    assert excinfo.value is error


def test_fresh_run_empties_the_log(tmp_path):
    path = tmp_path / "training_log.jsonl"
    path.write_text(update(8).model_dump_json() + "\n")
    start_log(path, 0)
    assert path.read_text() == ""


def test_resumed_run_drops_records_past_the_checkpoint(tmp_path):
    path = tmp_path / "training_log.jsonl"
    sink = log_sink(path)
    for record in (update(8), EvalRecord(timestep=8, episodes=1, mean_episode_reward=1.0, eval_collision_pct=0.0), update(16)):
        sink(record)
    start_log(path, 8)
    assert [r.timestep for r in read_log(path).ok] == [8, 8]


def test_summary_rows():
    rows = summary_rows([SUMMARY, None])
    assert len(rows) == len(SUMMARY_ROWS)
    assert rows[0] == ["Episodes", "100", "-"]
    assert rows[5] == ["Mean merge velocity (m/s)", "21.0", "-"]
    assert rows[8] == ["Gc/G0 > 0.5 (%)", "-", "-"]


def test_show_summary_table(display_ctx, mock_console):
    assert show_summary_table(display_ctx, "Sweep", ["a", "b"], [SUMMARY, None]).is_ok()
    mock_console.print.assert_called_once()


def test_svo_columns_pad_missing_checkpoints():
    run = RunConfig(command="sweep", checkpoints=[Path("a.json")])
    columns = svo_columns(run).ok
    assert list(columns) == list(SVO_LABELS)
    assert columns[SVO_LABELS[0]] == Path("a.json")
    assert columns[SVO_LABELS[2]] is None


def test_sweep_document_mixes_summaries_and_errors():
    document = sweep_document(
        [
            SweepColumn("a", Ok(SUMMARY)),
            SweepColumn("b", Error(SweepError.MissingCheckpoint("b"))),
        ]
    )
    assert document["a"]["n_merges"] == 98
    assert set(document["b"]) == {"error"}


def test_svo_columns_limit():
    run = RunConfig(command="sweep", checkpoints=[Path(f"{i}.json") for i in range(4)])
    result = svo_columns(run)
    assert result.is_error()
    assert result.error.exit_code == 2


@pytest.mark.parametrize("command", ["eval", "replay", "density-sweep"])
def test_commands_without_checkpoint(command):
    result = require_checkpoint(RunConfig(command=command))
    assert result.is_error()
    assert result.error.kind == "missing_checkpoint"
