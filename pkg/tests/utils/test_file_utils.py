"""Unit tests for file_utils.py module."""

from expression import Ok

from mergelab.utils.file_utils import FileError, append_line, ensure_directory, read_file, write_file


def test_file_error_message():
    assert str(FileError(message="Failed to read file", path="/runs/a")) == "Failed to read file: /runs/a"


def test_write_creates_parents(tmp_path):
    path = tmp_path / "a" / "b" / "manifest.json"
    assert write_file(path, "{}\n") == Ok(path)
    assert read_file(path) == Ok("{}\n")


def test_append_line(tmp_path):
    path = tmp_path / "log.jsonl"
    append_line(path, "one")
    append_line(path, "two\n")
    assert path.read_text() == "one\ntwo\n"


def test_read_missing_file(tmp_path):
    result = read_file(tmp_path / "absent.txt")
    assert result.is_error()
    assert result.error.path.endswith("absent.txt")
    assert "Failed to read file" in result.error.message


def test_ensure_directory(tmp_path):
    path = tmp_path / "runs" / "x"
    assert ensure_directory(path) == Ok(path)
    assert path.is_dir()


def test_directory_blocked_by_a_file(tmp_path):
    blocker = tmp_path / "out"
    blocker.write_text("")
    result = ensure_directory(blocker / "run")
    assert result.is_error()
    assert "Failed to create directory" in result.error.message
