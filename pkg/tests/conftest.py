"""Shared fixtures: a deterministic 8-sensor, 2-day synthetic dataset.

The generator writes plain JSON lines (no package serialization helpers) so
dataset parsing is exercised against independently produced input, and keeps
the raw (timestamp, pm2_5) series around as ground truth for oracle checks.
"""

import json
import random
from datetime import datetime, timezone

import pytest

from airwatch.config import AppConfig, SensorMeta
from airwatch.geo import GeoPoint

# id, name, lat, lon — all inside the Kansas City service area.
SENSOR_SPECS = (
    ("90121", "Troost & 31st", 39.0689, -94.5735),
    ("90233", "Armourdale", 39.0856, -94.6391),
    ("90347", "Sheffield", 39.1114, -94.4965),
    ("90412", "Westside", 39.0832, -94.6010),
    ("90558", "Blue Valley", 39.0647, -94.4820),
    ("90663", "Northeast", 39.1205, -94.5372),
    ("90771", "Argentine", 39.0703, -94.6715),
    ("90884", "Ivanhoe", 39.0441, -94.5524),
)

T0 = 1735689600  # 2025-01-01T00:00:00Z
CADENCE_SECS = 600
SAMPLES = 288  # two days at ten-minute cadence


def iso(ts: int) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def generate_series() -> dict[str, list[tuple[int, float]]]:
    """Per-sensor (timestamp, pm2_5) ground truth; a plume hits one sensor."""
    rng = random.Random(T0)
    series = {}
    for idx, (sensor_id, _name, _lat, _lon) in enumerate(SENSOR_SPECS):
        level = 4.0 + 3.0 * idx
        rows = []
        for i in range(SAMPLES):
            level = max(0.0, level + rng.uniform(-1.5, 1.5))
            value = level
            if sensor_id == "90233" and 120 <= i < 150:
                value += 60.0
            rows.append((T0 + i * CADENCE_SECS, round(value, 2)))
        series[sensor_id] = rows
    return series


def write_dataset(path, series) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sensor_id, rows in series.items():
            for ts, value in rows:
                fh.write(json.dumps(
                    {"sensor_id": sensor_id, "timestamp": iso(ts), "pm2_5": value}
                ) + "\n")


@pytest.fixture(scope="session")
def dataset_series():
    return generate_series()


@pytest.fixture(scope="session")
def dataset_path(tmp_path_factory, dataset_series):
    path = tmp_path_factory.mktemp("dataset") / "readings.jsonl"
    write_dataset(path, dataset_series)
    return path


def make_config(data_dir, admin_token="test-admin-token") -> AppConfig:
    return AppConfig(
        sensors=[
            SensorMeta(id=sid, name=name, location=GeoPoint(lat, lon))
            for sid, name, lat, lon in SENSOR_SPECS
        ],
        admin_token=admin_token,
        data_dir=str(data_dir),
    )


@pytest.fixture
def replay_state(tmp_path, dataset_path):
    from airwatch.cli import build_runtime

    return build_runtime(make_config(tmp_path / "data"), replay_path=dataset_path)
