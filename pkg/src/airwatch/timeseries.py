"""Per-sensor reading storage with rolling-window averages and chart slicing.

One writer (the ingest loop) and many readers (API handlers) share a store;
a single lock serializes access so every read sees a consistent snapshot,
never a half-applied append or prune.
"""

import json
import threading
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Optional

from .aqi import AqiScale, DEFAULT_SCALE
from .errors import NotFoundError, ValidationError
from .timeutil import parse_iso8601, to_iso8601

# Ingestion accepts timestamps up to this far ahead of the clock (skew allowance).
CLOCK_SKEW_SECS = 60

DEFAULT_RETENTION_SECS = 8 * 86400  # 1 week of windows + 1 day of slack


@dataclass(frozen=True)
class Reading:
    """One timestamped PM2.5 measurement from one sensor."""

    sensor_id: str
    timestamp: int  # epoch seconds, UTC
    pm2_5: float
    temperature: Optional[float] = None  # degrees Celsius
    humidity: Optional[float] = None  # percent

    def validate(self, now: float) -> None:
        if not self.sensor_id:
            raise ValidationError("reading has no sensor_id")
        if self.pm2_5 is None or self.pm2_5 < 0:
            raise ValidationError(f"pm2_5 must be >= 0, got {self.pm2_5}")
        if self.timestamp > now + CLOCK_SKEW_SECS:
            raise ValidationError(
                f"timestamp {self.timestamp} is more than {CLOCK_SKEW_SECS}s in the future"
            )


def reading_to_json(reading: Reading) -> str:
    record = {
        "sensor_id": reading.sensor_id,
        "timestamp": to_iso8601(reading.timestamp),
        "pm2_5": reading.pm2_5,
    }
    if reading.temperature is not None:
        record["temperature"] = reading.temperature
    if reading.humidity is not None:
        record["humidity"] = reading.humidity
    return json.dumps(record)


def reading_from_json(line: str) -> Reading:
    record = json.loads(line)
    try:
        sensor_id = record["sensor_id"]
        timestamp = record["timestamp"]
        pm2_5 = float(record["pm2_5"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad reading record: {exc}") from exc
    if isinstance(timestamp, str):
        timestamp = parse_iso8601(timestamp)
    temperature = record.get("temperature")
    humidity = record.get("humidity")
    return Reading(
        sensor_id=str(sensor_id),
        timestamp=int(timestamp),
        pm2_5=pm2_5,
        temperature=None if temperature is None else float(temperature),
        humidity=None if humidity is None else float(humidity),
    )


@dataclass(frozen=True)
class Window:
    name: str
    duration_secs: int  # 0 = latest single reading


# Fixed interval set, PurpleAir-style; order here is the ring order (innermost first).
WINDOWS = (
    Window("realtime", 0),
    Window("10min", 600),
    Window("30min", 1800),
    Window("60min", 3600),
    Window("6hour", 21600),
    Window("24hour", 86400),
    Window("1week", 604800),
)

_WINDOWS_BY_NAME = {w.name: w for w in WINDOWS}


def window_by_name(name: str) -> Window:
    try:
        return _WINDOWS_BY_NAME[name]
    except KeyError:
        raise ValidationError(f"unknown window {name!r}") from None


@dataclass(frozen=True)
class WindowSummary:
    window: Window
    mean_concentration: Optional[float]
    aqi: Optional[int]
    color: Optional[tuple]
    sample_count: int


class ReadingStore:
    """Time-ordered per-sensor reading sequences with a retention horizon."""

    def __init__(self, retention_secs: int = DEFAULT_RETENTION_SECS, journal_path=None):
        self.retention_secs = retention_secs
        self.journal_path = journal_path
        self._lock = threading.Lock()
        self._readings: dict[str, list[Reading]] = {}
        self._timestamps: dict[str, list[int]] = {}

    def register_sensor(self, sensor_id: str) -> None:
        """Make a sensor known before any data arrives (empty series)."""
        with self._lock:
            self._readings.setdefault(sensor_id, [])
            self._timestamps.setdefault(sensor_id, [])

    def sensor_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._readings)

    def has_sensor(self, sensor_id: str) -> bool:
        with self._lock:
            return sensor_id in self._readings

    def __len__(self) -> int:
        with self._lock:
            return sum(len(series) for series in self._readings.values())

    def append(self, reading: Reading, now: Optional[float] = None) -> str:
        """Insert a reading in timestamp order. Returns "appended" or "duplicate".

        Exact (sensor_id, timestamp) duplicates are ignored. Invalid readings
        raise ValidationError and leave the store untouched.
        """
        reading.validate(now if now is not None else reading.timestamp)
        with self._lock:
            timestamps = self._timestamps.setdefault(reading.sensor_id, [])
            series = self._readings.setdefault(reading.sensor_id, [])
            i = bisect_left(timestamps, reading.timestamp)
            if i < len(timestamps) and timestamps[i] == reading.timestamp:
                return "duplicate"
            timestamps.insert(i, reading.timestamp)
            series.insert(i, reading)
        if self.journal_path is not None:
            with open(self.journal_path, "a", encoding="utf-8") as fh:
                fh.write(reading_to_json(reading) + "\n")
        return "appended"

    def _series(self, sensor_id: str) -> list[Reading]:
        try:
            return self._readings[sensor_id]
        except KeyError:
            raise NotFoundError(f"unknown sensor {sensor_id!r}") from None

    def readings(self, sensor_id: str) -> list[Reading]:
        with self._lock:
            return list(self._series(sensor_id))

    def latest(self, sensor_id: str, now: Optional[float] = None) -> Optional[Reading]:
        """Most recent reading; with `now`, the most recent one at or before it."""
        with self._lock:
            series = self._series(sensor_id)
            if now is None:
                return series[-1] if series else None
            i = bisect_right(self._timestamps[sensor_id], now)
            return series[i - 1] if i > 0 else None

    def latest_timestamp(self) -> Optional[int]:
        """Newest timestamp across all sensors (data-freshness marker)."""
        with self._lock:
            newest = None
            for timestamps in self._timestamps.values():
                if timestamps and (newest is None or timestamps[-1] > newest):
                    newest = timestamps[-1]
            return newest

    def window_average(self, sensor_id: str, window, now: float) -> Optional[float]:
        """Arithmetic mean of pm2_5 over (now - duration, now]; None if no samples.

        The realtime window returns the latest reading's pm2_5 unchanged.
        """
        window = window_by_name(window) if isinstance(window, str) else window
        values = self._window_values(sensor_id, window, now)
        if not values:
            return None
        if window.duration_secs == 0:
            return values[0]
        return sum(values) / len(values)

    def _window_values(self, sensor_id: str, window: Window, now: float) -> list[float]:
        with self._lock:
            series = self._series(sensor_id)
            timestamps = self._timestamps[sensor_id]
            hi = bisect_right(timestamps, now)
            if window.duration_secs == 0:
                return [series[hi - 1].pm2_5] if hi > 0 else []
            lo = bisect_right(timestamps, now - window.duration_secs)
            return [r.pm2_5 for r in series[lo:hi]]

    def window_summaries(self, sensor_id: str, now: float, scale: AqiScale = DEFAULT_SCALE) -> list[WindowSummary]:
        """One summary per window, in declaration order (the ring data).

        The per-window AQI is the AQI of the mean concentration, never a
        mean of per-reading AQIs.
        """
        summaries = []
        for window in WINDOWS:
            values = self._window_values(sensor_id, window, now)
            if not values:
                summaries.append(WindowSummary(window, None, None, None, 0))
                continue
            mean = values[0] if window.duration_secs == 0 else sum(values) / len(values)
            aqi = scale.pm25_to_aqi(mean)
            color = scale.marker_color(aqi)
            summaries.append(WindowSummary(window, mean, aqi, color, len(values)))
        return summaries

    def slice(self, sensor_id: str, from_ts: float, to_ts: float, max_points: int) -> list[tuple[int, float]]:
        """Readings in [from_ts, to_ts] as (timestamp, pm2_5) pairs.

        When more than max_points qualify, interior readings are merged into
        equal-width time buckets (bucket mean at the bucket-center timestamp);
        the true first and last readings always survive unchanged.
        """
        if from_ts >= to_ts:
            raise ValidationError("time range is inverted or empty")
        if max_points < 2:
            raise ValidationError("max_points must be >= 2")
        with self._lock:
            series = self._series(sensor_id)
            timestamps = self._timestamps[sensor_id]
            lo = bisect_left(timestamps, from_ts)
            hi = bisect_right(timestamps, to_ts)
            points = [(r.timestamp, r.pm2_5) for r in series[lo:hi]]
        if len(points) <= max_points:
            return points
        return downsample(points, from_ts, to_ts, max_points)

    def prune(self, now: float) -> int:
        """Drop readings older than the retention horizon. Returns count removed."""
        cutoff = now - self.retention_secs
        removed = 0
        with self._lock:
            for sensor_id, timestamps in self._timestamps.items():
                i = bisect_left(timestamps, cutoff)
                if i > 0:
                    removed += i
                    del timestamps[:i]
                    del self._readings[sensor_id][:i]
        return removed


def downsample(points: list[tuple[int, float]], from_ts: float, to_ts: float, max_points: int) -> list[tuple[int, float]]:
    """Bucket-mean downsampling that preserves the raw first and last points.

    Interior points fall into max_points - 2 equal-width buckets spanning
    [from_ts, to_ts]; each non-empty bucket contributes its mean value at the
    bucket-center timestamp. Means (not decimation) keep spikes visible in
    the aggregate instead of aliasing them away.
    """
    first, last = points[0], points[-1]
    interior = points[1:-1]
    n_buckets = max_points - 2
    width = (to_ts - from_ts) / n_buckets
    sums = [0.0] * n_buckets
    counts = [0] * n_buckets
    for ts, value in interior:
        idx = min(int((ts - from_ts) / width), n_buckets - 1)
        sums[idx] += value
        counts[idx] += 1
    out = [first]
    for idx in range(n_buckets):
        if counts[idx]:
            center = from_ts + (idx + 0.5) * width
            out.append((round(center), sums[idx] / counts[idx]))
    out.append(last)
    return out
