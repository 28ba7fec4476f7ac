"""Rate-limited polling of a PurpleAir-compatible upstream, plus dataset replay.

The service is its own cache: API reads never reach the upstream, only the
poll loop does, and it refreshes on a fixed interval behind a global
one-request-per-minute gate. Replay mode feeds a captured readings journal
through a virtual clock so the full system runs with no upstream at all.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .errors import ParseError, ValidationError
from .geo import GeoPoint
from .timeseries import Reading, ReadingStore, reading_from_json

logger = logging.getLogger(__name__)

DEFAULT_POLL_INTERVAL_SECS = 600
DEFAULT_MIN_REQUEST_INTERVAL_SECS = 60
DEFAULT_REQUEST_TIMEOUT_SECS = 10


@dataclass
class UpstreamConfig:
    base_url: str
    sensor_ids: list[str]
    api_key: Optional[str] = None
    poll_interval: float = DEFAULT_POLL_INTERVAL_SECS
    min_request_interval: float = DEFAULT_MIN_REQUEST_INTERVAL_SECS
    request_timeout: float = DEFAULT_REQUEST_TIMEOUT_SECS

    def __post_init__(self):
        if not self.sensor_ids:
            raise ValidationError("at least one sensor id must be configured")
        if not (self.poll_interval >= self.min_request_interval >= 1):
            raise ValidationError("need poll_interval >= min_request_interval >= 1")


class RateLimiter:
    """Serialized gate granting at most one permit per min_request_interval.

    Applied globally per upstream (the stricter reading of a per-key limit).
    Grant timestamps are kept for rate-limit audits.
    """

    def __init__(self, min_request_interval: float):
        self.min_request_interval = min_request_interval
        self.last_permit_time: Optional[float] = None
        self.grants: list[float] = []

    def acquire(self, now: float) -> Optional[float]:
        """None = permit granted at `now`; otherwise the earliest allowed instant."""
        if self.last_permit_time is not None and now - self.last_permit_time < self.min_request_interval:
            return self.last_permit_time + self.min_request_interval
        self.last_permit_time = now
        self.grants.append(now)
        return None


@dataclass
class SensorStatus:
    sensor_id: str
    name: str
    location: Optional[GeoPoint] = None
    last_success: Optional[float] = None
    last_error: Optional[tuple[float, str]] = None

    def online(self, now: float, poll_interval: float) -> bool:
        # One missed poll cycle is tolerated before a sensor goes offline.
        return self.last_success is not None and now - self.last_success <= 2 * poll_interval


@dataclass(frozen=True)
class RawPayload:
    body: bytes
    received_at: float


@dataclass
class ParsedPayload:
    readings: list[Reading]
    location: Optional[GeoPoint] = None
    name: Optional[str] = None


def fahrenheit_to_celsius(f: float) -> float:
    return (f - 32.0) * 5.0 / 9.0


def parse_payload(raw: RawPayload, sensor_id: str) -> ParsedPayload:
    """Normalize one upstream response body into readings.

    Accepts both the `pm2.5` and `pm2_5` key spellings (the upstream schema
    has drifted over the years), epoch-seconds `last_seen` timestamps,
    Fahrenheit `temperature`, percent `humidity`, and optional
    `latitude`/`longitude`/`name` sensor metadata. Unknown fields are ignored.
    """
    try:
        body = json.loads(raw.body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"payload is not JSON: {exc}", sensor_id=sensor_id) from exc
    record = body.get("sensor", body) if isinstance(body, dict) else None
    if not isinstance(record, dict):
        raise ParseError("payload has no sensor object", sensor_id=sensor_id)

    pm = record.get("pm2_5", record.get("pm2.5"))
    if pm is None:
        raise ParseError("payload is missing pm2_5", sensor_id=sensor_id)
    timestamp = record.get("last_seen")
    if timestamp is None:
        raise ParseError("payload is missing last_seen timestamp", sensor_id=sensor_id)
    try:
        pm = float(pm)
        timestamp = int(timestamp)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"unusable pm2_5/last_seen values: {exc}", sensor_id=sensor_id) from exc
    if pm < 0:
        raise ValidationError(f"sensor {sensor_id} reported negative pm2_5 {pm}")

    temperature = record.get("temperature")
    humidity = record.get("humidity")
    reading = Reading(
        sensor_id=sensor_id,
        timestamp=timestamp,
        pm2_5=pm,
        temperature=None if temperature is None else fahrenheit_to_celsius(float(temperature)),
        humidity=None if humidity is None else float(humidity),
    )

    location = None
    if record.get("latitude") is not None and record.get("longitude") is not None:
        try:
            location = GeoPoint(float(record["latitude"]), float(record["longitude"]))
        except (TypeError, ValueError, ValidationError):
            location = None  # metadata only, never worth failing the reading
    name = record.get("name")
    return ParsedPayload(readings=[reading], location=location, name=name)


def http_fetcher(config: UpstreamConfig) -> Callable[[str], bytes]:
    """Real transport: GET {base_url}/v1/sensors/{id} with the API key header."""
    import requests

    base = config.base_url.rstrip("/")

    def fetch(sensor_id: str) -> bytes:
        headers = {}
        if config.api_key:
            headers["X-API-Key"] = config.api_key
        resp = requests.get(
            f"{base}/v1/sensors/{sensor_id}",
            headers=headers,
            timeout=config.request_timeout,
        )
        resp.raise_for_status()
        return resp.content

    return fetch


@dataclass
class CycleOutcome:
    sensor_id: str
    ok: bool
    detail: str  # "appended" / "duplicate" / error text


class Poller:
    """Sequential poll loop: one pass fetches every configured sensor in id order.

    A failed fetch or parse is recorded on that sensor's status and never
    aborts the rest of the cycle, and never leaves a partial reading behind.
    """

    def __init__(self, config: UpstreamConfig, store: ReadingStore, clock,
                 fetcher: Callable[[str], bytes],
                 statuses: Optional[dict[str, SensorStatus]] = None):
        self.config = config
        self.store = store
        self.clock = clock
        self.fetcher = fetcher
        self.limiter = RateLimiter(config.min_request_interval)
        self.statuses = statuses if statuses is not None else {
            sid: SensorStatus(sensor_id=sid, name=sid) for sid in config.sensor_ids
        }
        self.cycles_completed = 0
        self.last_poll_at: Optional[float] = None
        for sid in config.sensor_ids:
            self.store.register_sensor(sid)

    def _wait_for_permit(self) -> None:
        while True:
            allowed_at = self.limiter.acquire(self.clock.now())
            if allowed_at is None:
                return
            self.clock.sleep(allowed_at - self.clock.now())

    def poll_cycle(self) -> list[CycleOutcome]:
        """One fetch+parse+append pass over all sensors, in id order."""
        outcomes = []
        for sensor_id in sorted(self.config.sensor_ids):
            status = self.statuses.setdefault(sensor_id, SensorStatus(sensor_id=sensor_id, name=sensor_id))
            self._wait_for_permit()
            try:
                body = self.fetcher(sensor_id)
                parsed = parse_payload(RawPayload(body=body, received_at=self.clock.now()), sensor_id)
                detail = "appended"
                for reading in parsed.readings:
                    detail = self.store.append(reading, now=self.clock.now())
            except Exception as exc:
                now = self.clock.now()
                status.last_error = (now, str(exc))
                outcomes.append(CycleOutcome(sensor_id, False, str(exc)))
                logger.warning("poll of sensor %s failed: %s", sensor_id, exc)
                continue
            if parsed.location is not None:
                status.location = parsed.location
            if parsed.name:
                status.name = str(parsed.name)
            status.last_success = self.clock.now()
            outcomes.append(CycleOutcome(sensor_id, True, detail))
        self.cycles_completed += 1
        self.last_poll_at = self.clock.now()
        return outcomes

    def run_until(self, end_time: float) -> int:
        """Run cycles on the poll interval until the clock passes end_time.

        Returns the number of cycles run. Used for simulations and tests;
        live serving uses run_forever.
        """
        next_cycle = self.clock.now()
        cycles = 0
        while next_cycle < end_time:
            self.clock.sleep(next_cycle - self.clock.now())
            self.poll_cycle()
            cycles += 1
            next_cycle += self.config.poll_interval
        return cycles

    def run_forever(self) -> None:
        next_cycle = self.clock.now()
        while True:
            self.clock.sleep(next_cycle - self.clock.now())
            self.poll_cycle()
            next_cycle += self.config.poll_interval


@dataclass
class ReplayResult:
    loaded: int
    skipped_lines: list[int] = field(default_factory=list)


def replay(dataset_path, store: ReadingStore, clock, speed_factor: float = math.inf,
           statuses: Optional[dict[str, SensorStatus]] = None) -> ReplayResult:
    """Load a captured readings journal, advancing a virtual clock as it goes.

    Readings are appended in timestamp order. speed_factor scales virtual
    time against real time; infinity loads the whole file instantly.
    Malformed lines are skipped and reported by line number; a missing file
    is a startup error.
    """
    path = Path(dataset_path)
    if not path.exists():
        raise FileNotFoundError(f"replay dataset not found: {path}")

    entries: list[tuple[int, Reading]] = []
    skipped: list[int] = []
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                entries.append((line_no, reading_from_json(line)))
            except (ValidationError, ValueError) as exc:
                skipped.append(line_no)
                logger.warning("replay: skipping malformed line %d of %s: %s", line_no, path, exc)

    entries.sort(key=lambda e: (e[1].timestamp, e[1].sensor_id))
    loaded = 0
    previous_ts = None
    for line_no, reading in entries:
        if math.isfinite(speed_factor) and previous_ts is not None and reading.timestamp > previous_ts:
            import time
            time.sleep((reading.timestamp - previous_ts) / speed_factor)
        if hasattr(clock, "advance_to"):
            clock.advance_to(reading.timestamp)
        try:
            store.append(reading, now=clock.now())
        except ValidationError as exc:
            skipped.append(line_no)
            logger.warning("replay: rejecting line %d of %s: %s", line_no, path, exc)
            continue
        previous_ts = reading.timestamp
        if statuses is not None:
            status = statuses.setdefault(
                reading.sensor_id, SensorStatus(sensor_id=reading.sensor_id, name=reading.sensor_id)
            )
            status.last_success = float(reading.timestamp)
        loaded += 1
    return ReplayResult(loaded=loaded, skipped_lines=skipped)
