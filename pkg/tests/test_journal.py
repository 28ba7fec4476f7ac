"""JSONL journal durability rules: torn tails are survivable, mid-file damage is not."""

import json

import pytest

from airwatch.errors import JournalCorruptError
from airwatch.journal import append_record, read_records


def test_missing_file_reads_empty(tmp_path):
    assert read_records(tmp_path / "nope.jsonl") == []


def test_append_read_round_trip(tmp_path):
    path = tmp_path / "deep" / "j.jsonl"  # parent dir is created on demand
    records = [{"n": i, "payload": f"row-{i}"} for i in range(10)]
    for record in records:
        append_record(path, record)
    assert read_records(path) == records


def test_torn_trailing_line_is_discarded_with_warning(tmp_path, caplog):
    path = tmp_path / "j.jsonl"
    for i in range(9):
        append_record(path, {"n": i})
    with path.open("a", encoding="utf-8") as fh:
        fh.write('{"n": 9, "tru')  # power loss mid-write
    with caplog.at_level("WARNING"):
        records = read_records(path)
    assert records == [{"n": i} for i in range(9)]
    assert any("torn trailing" in message for message in caplog.messages)


def test_torn_line_followed_by_blank_lines_still_counts_as_trailing(tmp_path):
    path = tmp_path / "j.jsonl"
    append_record(path, {"ok": True})
    with path.open("a", encoding="utf-8") as fh:
        fh.write('{"broken\n\n\n')
    assert read_records(path) == [{"ok": True}]


def test_mid_file_corruption_raises(tmp_path):
    path = tmp_path / "j.jsonl"
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({"n": 1}) + "\n")
        fh.write("not json at all\n")
        fh.write(json.dumps({"n": 3}) + "\n")
    with pytest.raises(JournalCorruptError) as excinfo:
        read_records(path)
    assert excinfo.value.line_no == 2


def test_non_object_line_is_corruption(tmp_path):
    path = tmp_path / "j.jsonl"
    with path.open("w", encoding="utf-8") as fh:
        fh.write('[1, 2, 3]\n')
        fh.write(json.dumps({"n": 1}) + "\n")
    with pytest.raises(JournalCorruptError):
        read_records(path)
