"""Operator configuration merged from flags, environment, and a JSON file.

Precedence is flags > environment > file > defaults. The JSON file mirrors
the environment key names (case-insensitive) and may additionally carry
structured settings the environment can't express: a rich `sensors` list
with names and coordinates, a `service_area` box, and a custom `colorscale`.
"""

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import ValidationError
from .geo import BoundingBox, GeoPoint
from .ingest import (
    DEFAULT_MIN_REQUEST_INTERVAL_SECS,
    DEFAULT_POLL_INTERVAL_SECS,
    DEFAULT_REQUEST_TIMEOUT_SECS,
)
from .reports import KC_SERVICE_AREA
from .timeseries import DEFAULT_RETENTION_SECS

DEFAULT_BIND_ADDR = "127.0.0.1:8080"

ENV_KEYS = (
    "UPSTREAM_BASE_URL",
    "UPSTREAM_API_KEY",
    "SENSOR_IDS",
    "POLL_INTERVAL_SECS",
    "MIN_REQUEST_INTERVAL_SECS",
    "REQUEST_TIMEOUT_SECS",
    "BIND_ADDR",
    "ADMIN_TOKEN",
    "DATA_DIR",
    "RETENTION_SECS",
)

_SECRET_KEYS = {"upstream_api_key", "admin_token"}


@dataclass
class SensorMeta:
    id: str
    name: str
    location: Optional[GeoPoint] = None


@dataclass
class AppConfig:
    upstream_base_url: str = "https://api.purpleair.com"
    upstream_api_key: Optional[str] = None
    sensors: list[SensorMeta] = field(default_factory=list)
    poll_interval_secs: float = DEFAULT_POLL_INTERVAL_SECS
    min_request_interval_secs: float = DEFAULT_MIN_REQUEST_INTERVAL_SECS
    request_timeout_secs: float = DEFAULT_REQUEST_TIMEOUT_SECS
    bind_addr: str = DEFAULT_BIND_ADDR
    admin_token: Optional[str] = None
    data_dir: str = "data"
    retention_secs: int = DEFAULT_RETENTION_SECS
    service_area: BoundingBox = KC_SERVICE_AREA
    colorscale_path: Optional[str] = None

    @property
    def sensor_ids(self) -> list[str]:
        return [s.id for s in self.sensors]

    def host_port(self) -> tuple[str, int]:
        host, _, port = self.bind_addr.rpartition(":")
        try:
            return host or "127.0.0.1", int(port)
        except ValueError:
            raise ValidationError(f"bad BIND_ADDR {self.bind_addr!r}, expected host:port") from None

    def redacted(self) -> dict:
        """Effective settings for the startup banner, secrets masked."""
        out = {
            "upstream_base_url": self.upstream_base_url,
            "upstream_api_key": "***" if self.upstream_api_key else None,
            "sensors": [
                {"id": s.id, "name": s.name,
                 "location": None if s.location is None else {"lat": s.location.lat, "lon": s.location.lon}}
                for s in self.sensors
            ],
            "poll_interval_secs": self.poll_interval_secs,
            "min_request_interval_secs": self.min_request_interval_secs,
            "request_timeout_secs": self.request_timeout_secs,
            "bind_addr": self.bind_addr,
            "admin_token": "***" if self.admin_token else None,
            "data_dir": self.data_dir,
            "retention_secs": self.retention_secs,
            "service_area": {
                "min_lon": self.service_area.min_lon, "min_lat": self.service_area.min_lat,
                "max_lon": self.service_area.max_lon, "max_lat": self.service_area.max_lat,
            },
            "colorscale_path": self.colorscale_path,
        }
        return out


def _parse_sensors(value) -> list[SensorMeta]:
    sensors = []
    if isinstance(value, str):  # SENSOR_IDS=a,b,c
        for sid in value.split(","):
            sid = sid.strip()
            if sid:
                sensors.append(SensorMeta(id=sid, name=sid))
        return sensors
    for entry in value:
        if isinstance(entry, str):
            sensors.append(SensorMeta(id=entry, name=entry))
            continue
        sid = str(entry["id"])
        location = None
        if entry.get("lat") is not None and entry.get("lon") is not None:
            location = GeoPoint(float(entry["lat"]), float(entry["lon"]))
        sensors.append(SensorMeta(id=sid, name=str(entry.get("name", sid)), location=location))
    return sensors


def load_config(file_path=None, env=None, overrides=None) -> AppConfig:
    """Build the effective config. Raises ValidationError on unusable input."""
    env = os.environ if env is None else env
    merged: dict = {}

    if file_path is not None:
        path = Path(file_path)
        try:
            raw = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ValidationError(f"cannot read config file {path}: {exc}") from exc
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ValidationError(f"config file {path} must hold a JSON object")
        merged.update({str(k).lower(): v for k, v in data.items()})

    for key in ENV_KEYS:
        if key in env and env[key] != "":
            merged[key.lower()] = env[key]

    if overrides:
        merged.update({k.lower(): v for k, v in overrides.items() if v is not None})

    config = AppConfig()
    try:
        if "upstream_base_url" in merged:
            config.upstream_base_url = str(merged["upstream_base_url"])
        if "upstream_api_key" in merged:
            config.upstream_api_key = merged["upstream_api_key"] or None
        if "sensors" in merged:
            config.sensors = _parse_sensors(merged["sensors"])
        if "sensor_ids" in merged:  # env-style comma list; file `sensors` wins if both
            if not config.sensors:
                config.sensors = _parse_sensors(merged["sensor_ids"])
        if "poll_interval_secs" in merged:
            config.poll_interval_secs = float(merged["poll_interval_secs"])
        if "min_request_interval_secs" in merged:
            config.min_request_interval_secs = float(merged["min_request_interval_secs"])
        if "request_timeout_secs" in merged:
            config.request_timeout_secs = float(merged["request_timeout_secs"])
        if "bind_addr" in merged:
            config.bind_addr = str(merged["bind_addr"])
        if "admin_token" in merged:
            config.admin_token = merged["admin_token"] or None
        if "data_dir" in merged:
            config.data_dir = str(merged["data_dir"])
        if "retention_secs" in merged:
            config.retention_secs = int(merged["retention_secs"])
        if "service_area" in merged:
            box = merged["service_area"]
            config.service_area = BoundingBox(
                min_lon=float(box["min_lon"]), min_lat=float(box["min_lat"]),
                max_lon=float(box["max_lon"]), max_lat=float(box["max_lat"]),
            )
        if "colorscale" in merged:
            config.colorscale_path = str(merged["colorscale"])
        if "colorscale_path" in merged:
            config.colorscale_path = str(merged["colorscale_path"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad config value: {exc}") from exc

    if config.poll_interval_secs < config.min_request_interval_secs or config.min_request_interval_secs < 1:
        raise ValidationError("need poll_interval_secs >= min_request_interval_secs >= 1")
    config.host_port()  # validates bind_addr early
    return config
