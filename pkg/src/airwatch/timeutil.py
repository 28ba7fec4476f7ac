"""Epoch-seconds <-> ISO-8601 UTC conversion.

All timestamps are carried internally as epoch seconds and serialized as
ISO-8601 UTC with a Z suffix.
"""

from datetime import datetime, timezone


def to_iso8601(epoch_seconds) -> str:
    dt = datetime.fromtimestamp(round(epoch_seconds), tz=timezone.utc)
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_iso8601(text: str) -> int:
    """Parse an ISO-8601 instant to epoch seconds. Naive times are UTC."""
    # Python 3.10's fromisoformat does not accept a Z suffix.
    cleaned = text.strip()
    if cleaned.endswith(("Z", "z")):
        cleaned = cleaned[:-1] + "+00:00"
    dt = datetime.fromisoformat(cleaned)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())
