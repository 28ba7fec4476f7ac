"""Command-line front end.

Subcommands:
  serve           run the HTTP service (live polling, or --replay for a dataset)
  aqi             convert one PM2.5 concentration to AQI on stdout
  report          export per-sensor CSV + PNG chart from a captured dataset
  import-hazards  load an EPA-style facility CSV into the hazard journal

Exit codes: 0 success, 1 operational failure, 2 bad usage/config,
3 environment problem (e.g. port already bound).
"""

import argparse
import csv
import json
import logging
import math
import socket
import sys
import threading
from pathlib import Path
from typing import Optional

from .aqi import AqiScale, DEFAULT_SCALE, color_to_hex
from .charts import render_timeseries_png
from .clock import SystemClock, VirtualClock
from .config import AppConfig, load_config
from .errors import ValidationError
from .ingest import Poller, SensorStatus, UpstreamConfig, http_fetcher, replay
from .reports import HazardStore, ReportStore
from .service import AppState, create_app
from .timeseries import ReadingStore
from .timeutil import parse_iso8601, to_iso8601

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_OPERATIONAL = 1
EXIT_USAGE = 2
EXIT_ENVIRONMENT = 3


def _load_app_config(args) -> AppConfig:
    return load_config(args.config, overrides=_overrides(args))


def _load_scale(config: AppConfig) -> AqiScale:
    if not config.colorscale_path:
        return DEFAULT_SCALE
    with open(config.colorscale_path, "r", encoding="utf-8") as fh:
        return AqiScale.from_dict(json.load(fh))


def _recover_readings(store: ReadingStore, path, clock) -> int:
    """Reload a previous run's readings journal without re-journaling them."""
    if not Path(path).exists():
        return 0
    journal, store.journal_path = store.journal_path, None
    try:
        result = replay(path, store, clock)
    finally:
        store.journal_path = journal
    return result.loaded


def build_runtime(config: AppConfig, replay_path=None, speed: float = math.inf,
                  fetcher=None, clock=None) -> AppState:
    """Assemble stores, clock, and (in live mode) the poller behind one state object.

    Replay mode runs entirely on a virtual clock frozen at the dataset's last
    timestamp, so responses are deterministic for a given dataset. `fetcher`
    and `clock` are injection points for driving live mode without a network.
    """
    data_dir = Path(config.data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    scale = _load_scale(config)
    replay_mode = replay_path is not None
    if clock is None:
        clock = VirtualClock() if replay_mode else SystemClock()

    statuses = {
        meta.id: SensorStatus(sensor_id=meta.id, name=meta.name or meta.id, location=meta.location)
        for meta in config.sensors
    }

    store = ReadingStore(
        retention_secs=config.retention_secs,
        journal_path=None if replay_mode else data_dir / "readings.jsonl",
    )
    for sensor_id in config.sensor_ids:
        store.register_sensor(sensor_id)

    poller: Optional[Poller] = None
    if replay_mode:
        result = replay(replay_path, store, clock, speed_factor=speed, statuses=statuses)
        logger.info("replayed %d readings from %s (%d lines skipped)",
                    result.loaded, replay_path, len(result.skipped_lines))
    else:
        recovered = _recover_readings(store, data_dir / "readings.jsonl", clock)
        if recovered:
            logger.info("recovered %d readings from journal", recovered)
        upstream = UpstreamConfig(
            base_url=config.upstream_base_url,
            sensor_ids=config.sensor_ids,
            api_key=config.upstream_api_key,
            poll_interval=config.poll_interval_secs,
            min_request_interval=config.min_request_interval_secs,
            request_timeout=config.request_timeout_secs,
        )
        poller = Poller(upstream, store, clock, fetcher or http_fetcher(upstream), statuses=statuses)

    return AppState(
        config=config,
        clock=clock,
        store=store,
        report_store=ReportStore(data_dir / "reports.jsonl", clock, service_area=config.service_area),
        hazard_store=HazardStore(data_dir / "hazards.jsonl"),
        scale=scale,
        statuses=statuses,
        poller=poller,
        replay_mode=replay_mode,
    )


def _poll_loop(state: AppState) -> None:
    poller = state.poller
    next_cycle = poller.clock.now()
    while True:
        poller.clock.sleep(max(0.0, next_cycle - poller.clock.now()))
        try:
            poller.poll_cycle()
        except Exception:
            logger.exception("poll cycle failed")
        state.store.prune(poller.clock.now())
        next_cycle += poller.config.poll_interval


def _probe_bind(host: str, port: int) -> None:
    """Fail fast (and distinctly) when the port is already taken."""
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    finally:
        probe.close()


def cmd_serve(args) -> int:
    config = _load_app_config(args)
    state = build_runtime(config, replay_path=args.replay, speed=args.speed)
    host, port = config.host_port()
    try:
        _probe_bind(host, port)
    except OSError as exc:
        print(f"cannot bind {host}:{port}: {exc}", file=sys.stderr)
        return EXIT_ENVIRONMENT

    print(json.dumps({"listening": f"{host}:{port}", "config": config.redacted()}, indent=2))
    if state.poller is not None:
        threading.Thread(target=_poll_loop, args=(state,), daemon=True, name="poller").start()

    import uvicorn

    app = create_app(state)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def cmd_aqi(args) -> int:
    scale = DEFAULT_SCALE
    try:
        aqi = scale.pm25_to_aqi(args.concentration)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    category = scale.category_for(aqi)
    print(f"{aqi} {category.name} {category.guidance} {color_to_hex(scale.marker_color(aqi))}")
    return EXIT_OK


def cmd_report(args) -> int:
    config = _load_app_config(args)
    state = build_runtime(config, replay_path=args.replay)
    sensor_ids = args.sensor or state.store.sensor_ids()
    if not sensor_ids:
        print("error: dataset contains no sensors", file=sys.stderr)
        return EXIT_OPERATIONAL

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    bands = state.scale.concentration_bands()
    written = 0
    for sensor_id in sensor_ids:
        if not state.store.has_sensor(sensor_id):
            print(f"warning: unknown sensor {sensor_id!r}, skipping", file=sys.stderr)
            continue
        readings = state.store.readings(sensor_id)
        if not readings:
            print(f"warning: sensor {sensor_id} has no readings, skipping", file=sys.stderr)
            continue
        t_from = parse_iso8601(getattr(args, "from")) if getattr(args, "from") else readings[0].timestamp
        t_to = parse_iso8601(args.to) if args.to else readings[-1].timestamp
        points = state.store.slice(sensor_id, t_from, t_to, args.max_points)

        csv_path = out_dir / f"{sensor_id}.csv"
        with csv_path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["timestamp", "pm2_5", "aqi"])
            for ts, value in points:
                writer.writerow([to_iso8601(ts), f"{value:.3f}", state.scale.pm25_to_aqi(value)])

        name = state.status_for(sensor_id).name
        png_path = render_timeseries_png(points, bands, out_dir / f"{sensor_id}.png",
                                         title=f"{name} — PM2.5")
        print(f"sensor {sensor_id}: {len(points)} points -> {csv_path}, {png_path}")
        written += 1
    return EXIT_OK if written else EXIT_OPERATIONAL


def cmd_import_hazards(args) -> int:
    config = _load_app_config(args)
    csv_path = Path(args.csv_path)
    if not csv_path.is_file():
        print(f"error: cannot read {csv_path}", file=sys.stderr)
        return EXIT_USAGE
    data_dir = Path(config.data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    store = HazardStore(data_dir / "hazards.jsonl")
    try:
        imported, errors = store.import_csv(csv_path)
    except ValidationError as exc:
        # Readable file, unusable content (empty or wrong header): nothing imported.
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OPERATIONAL
    for row_no, message in errors:
        print(f"row {row_no}: {message}", file=sys.stderr)
    print(f"imported {imported}, errors {len(errors)}")
    return EXIT_OK if imported else EXIT_OPERATIONAL


def _overrides(args) -> dict:
    out = {}
    if getattr(args, "bind", None):
        out["bind_addr"] = args.bind
    if getattr(args, "data_dir", None):
        out["data_dir"] = args.data_dir
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="airwatch", description="Community air quality service")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", help="JSON config file")
    serve.add_argument("--replay", help="readings dataset to serve instead of live polling")
    serve.add_argument("--speed", type=float, default=math.inf,
                       help="replay speed factor (default: load instantly)")
    serve.add_argument("--bind", help="host:port to listen on")
    serve.add_argument("--data-dir", help="journal/state directory")
    serve.set_defaults(func=cmd_serve)

    aqi = sub.add_parser("aqi", help="convert a PM2.5 concentration to AQI")
    aqi.add_argument("concentration", type=float)
    aqi.set_defaults(func=cmd_aqi)

    report = sub.add_parser("report", help="export CSV + chart PNG per sensor from a dataset")
    report.add_argument("--replay", required=True, help="readings dataset (JSONL)")
    report.add_argument("--config", help="JSON config file")
    report.add_argument("--sensor", action="append", help="sensor id (repeatable; default: all)")
    report.add_argument("--from", dest="from", default=None, help="range start (ISO-8601)")
    report.add_argument("--to", default=None, help="range end (ISO-8601)")
    report.add_argument("--max-points", type=int, default=500)
    report.add_argument("--out-dir", default="report_out")
    report.add_argument("--data-dir", help="journal/state directory")
    report.set_defaults(func=cmd_report)

    imp = sub.add_parser("import-hazards", help="import an EPA-style facility CSV")
    imp.add_argument("csv_path")
    imp.add_argument("--config", help="JSON config file")
    imp.add_argument("--data-dir", help="journal/state directory")
    imp.set_defaults(func=cmd_import_hazards)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OPERATIONAL


if __name__ == "__main__":
    sys.exit(main())
