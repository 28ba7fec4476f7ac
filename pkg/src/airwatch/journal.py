"""Append-only JSONL journals with torn-write recovery.

One JSON object per line, UTF-8. A write interrupted mid-line leaves a
damaged trailing line, which replay discards with a warning; damage anywhere
else means the file was edited or the disk is unwell, and that demands an
operator, not a silent skip.
"""

import json
import logging
import os
from pathlib import Path

from .errors import JournalCorruptError

logger = logging.getLogger(__name__)


def append_record(path, record: dict) -> None:
    """Append one record durably (flush + fsync before returning)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as fh:
        fh.write(json.dumps(record) + "\n")
        fh.flush()
        os.fsync(fh.fileno())


def read_records(path) -> list[dict]:
    """Replay a journal. Missing file reads as empty.

    A corrupt trailing line is dropped with a warning; corruption that is
    followed by further valid lines raises JournalCorruptError.
    """
    path = Path(path)
    if not path.exists():
        return []
    records = []
    with path.open("r", encoding="utf-8") as fh:
        lines = fh.readlines()
    for i, line in enumerate(lines):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            record = json.loads(stripped)
            if not isinstance(record, dict):
                raise ValueError("journal line is not a JSON object")
        except ValueError as exc:
            trailing = all(not later.strip() for later in lines[i + 1:])
            if trailing:
                logger.warning("discarding torn trailing line %d of %s: %s", i + 1, path, exc)
                break
            raise JournalCorruptError(path, i + 1, str(exc)) from exc
        records.append(record)
    return records
