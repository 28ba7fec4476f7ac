"""HTTP/JSON API over the in-memory snapshot state.

Every endpoint reads the stores as they stand; nothing here ever triggers an
upstream fetch. Timestamps go out as ISO-8601 UTC, colors as "#RRGGBB", and
every non-2xx body carries {status, code, message}.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .aqi import AqiScale, DEFAULT_SCALE, color_to_hex
from .config import AppConfig
from .errors import NotFoundError, ValidationError
from .geo import BoundingBox, cluster_sites, bbox_filter
from .ingest import Poller, SensorStatus
from .reports import HazardStore, ReportStore, reports_to_csv
from .timeseries import ReadingStore, WindowSummary
from .timeutil import parse_iso8601, to_iso8601

logger = logging.getLogger(__name__)

DEFAULT_TIMESERIES_SPAN_SECS = 24 * 3600
DEFAULT_MAX_POINTS = 500


class ApiError(Exception):
    """Carried straight into a non-2xx JSON body."""

    def __init__(self, status: int, code: str, message: str, fields=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.fields = fields or {}

    def body(self) -> dict:
        out = {"status": self.status, "code": self.code, "message": self.message}
        if self.fields:
            out["fields"] = self.fields
        return out


@dataclass
class AppState:
    config: AppConfig
    clock: object
    store: ReadingStore
    report_store: ReportStore
    hazard_store: HazardStore
    scale: AqiScale = field(default_factory=lambda: DEFAULT_SCALE)
    statuses: dict = field(default_factory=dict)
    poller: Optional[Poller] = None
    replay_mode: bool = False

    def status_for(self, sensor_id: str) -> SensorStatus:
        if sensor_id not in self.statuses:
            meta = next((s for s in self.config.sensors if s.id == sensor_id), None)
            self.statuses[sensor_id] = SensorStatus(
                sensor_id=sensor_id,
                name=meta.name if meta else sensor_id,
                location=meta.location if meta else None,
            )
        return self.statuses[sensor_id]

    def ready(self) -> bool:
        if self.replay_mode:
            return True
        return self.poller is not None and self.poller.cycles_completed >= 1

    def last_poll_at(self) -> Optional[float]:
        return self.poller.last_poll_at if self.poller else None

    def sensor_order(self) -> list[str]:
        return sorted(self.config.sensor_ids) if self.config.sensors else self.store.sensor_ids()


def window_summary_payload(summary: WindowSummary) -> dict:
    return {
        "window": summary.window.name,
        "duration_secs": summary.window.duration_secs,
        "mean_concentration": summary.mean_concentration,
        "aqi": summary.aqi,
        "color": None if summary.color is None else color_to_hex(summary.color),
        "sample_count": summary.sample_count,
    }


def sensor_summary_payload(state: AppState, sensor_id: str, now: float) -> dict:
    status = state.status_for(sensor_id)
    latest = state.store.latest(sensor_id, now=now)

    current = None
    if latest is not None:
        aqi = state.scale.pm25_to_aqi(latest.pm2_5)
        category = state.scale.category_for(aqi)
        current = {
            "timestamp": to_iso8601(latest.timestamp),
            "pm2_5": latest.pm2_5,
            "aqi": aqi,
            "category": category.name,
            "guidance": category.guidance,
            "color": color_to_hex(state.scale.marker_color(aqi)),
        }

    # Freshness from either a live fetch or replayed data, whichever is newer.
    last_seen = max(
        (t for t in (status.last_success, None if latest is None else float(latest.timestamp)) if t is not None),
        default=None,
    )
    online = last_seen is not None and now - last_seen <= 2 * state.config.poll_interval_secs

    return {
        "sensor_id": sensor_id,
        "name": status.name,
        "location": None if status.location is None else {"lat": status.location.lat, "lon": status.location.lon},
        "online": online,
        "current": current,
        "windows": [
            window_summary_payload(s)
            for s in state.store.window_summaries(sensor_id, now, scale=state.scale)
        ],
    }


def _parse_bbox(text: str) -> BoundingBox:
    parts = text.split(",")
    if len(parts) != 4:
        raise ApiError(400, "bad_bbox", "bbox must be min_lon,min_lat,max_lon,max_lat")
    try:
        min_lon, min_lat, max_lon, max_lat = (float(p) for p in parts)
        return BoundingBox(min_lon=min_lon, min_lat=min_lat, max_lon=max_lon, max_lat=max_lat)
    except (ValueError, ValidationError) as exc:
        raise ApiError(400, "bad_bbox", f"unusable bbox: {exc}") from exc


def _parse_instant(value: str, param: str) -> int:
    try:
        return parse_iso8601(value)
    except ValueError as exc:
        raise ApiError(400, "bad_timestamp", f"{param} is not an ISO-8601 instant: {exc}") from exc


def create_app(state: AppState) -> FastAPI:
    app = FastAPI(title="airwatch", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.airwatch = state

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST", "OPTIONS"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body())

    @app.exception_handler(ValidationError)
    async def handle_validation_error(request: Request, exc: ValidationError):
        return JSONResponse(
            status_code=400,
            content=ApiError(400, "validation_error", str(exc), fields=exc.fields).body(),
        )

    @app.exception_handler(NotFoundError)
    async def handle_not_found(request: Request, exc: NotFoundError):
        return JSONResponse(status_code=404, content=ApiError(404, "not_found", str(exc)).body())

    @app.exception_handler(RequestValidationError)
    async def handle_request_validation(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content=ApiError(400, "validation_error", str(exc.errors())).body(),
        )

    @app.exception_handler(StarletteHTTPException)
    async def handle_http_exception(request: Request, exc: StarletteHTTPException):
        code = {404: "not_found", 405: "method_not_allowed"}.get(exc.status_code, "http_error")
        return JSONResponse(
            status_code=exc.status_code,
            content=ApiError(exc.status_code, code, str(exc.detail)).body(),
        )

    @app.get("/api/sensors")
    def list_sensors():
        now = state.clock.now()
        body = [sensor_summary_payload(state, sid, now) for sid in state.sensor_order()]
        as_of = state.store.latest_timestamp()
        headers = {"X-Data-As-Of": to_iso8601(as_of if as_of is not None else now)}
        return JSONResponse(content=body, headers=headers)

    @app.get("/api/sensors/{sensor_id}")
    def sensor_detail(sensor_id: str):
        if not state.store.has_sensor(sensor_id):
            raise ApiError(404, "sensor_not_found", f"unknown sensor {sensor_id!r}")
        return sensor_summary_payload(state, sensor_id, state.clock.now())

    @app.get("/api/sensors/{sensor_id}/timeseries")
    def sensor_timeseries(sensor_id: str, request: Request):
        if not state.store.has_sensor(sensor_id):
            raise ApiError(404, "sensor_not_found", f"unknown sensor {sensor_id!r}")
        now = state.clock.now()
        params = request.query_params
        t_to = _parse_instant(params["to"], "to") if "to" in params else int(now)
        t_from = _parse_instant(params["from"], "from") if "from" in params else t_to - DEFAULT_TIMESERIES_SPAN_SECS
        try:
            max_points = int(params.get("max_points", DEFAULT_MAX_POINTS))
        except ValueError:
            raise ApiError(400, "validation_error", "max_points must be an integer") from None
        points = state.store.slice(sensor_id, t_from, t_to, max_points)
        return {
            "sensor_id": sensor_id,
            "from": to_iso8601(t_from),
            "to": to_iso8601(t_to),
            "points": [{"timestamp": to_iso8601(ts), "pm2_5": value} for ts, value in points],
            "bands": state.scale.concentration_bands(),
        }

    @app.get("/api/hazards")
    def hazards(request: Request):
        params = request.query_params
        if "bbox" not in params:
            raise ApiError(400, "bad_bbox", "bbox query parameter is required")
        box = _parse_bbox(params["bbox"])
        try:
            zoom = int(params.get("zoom", ""))
        except ValueError:
            raise ApiError(400, "bad_zoom", "zoom must be an integer 0..19") from None
        if not 0 <= zoom <= 19:
            raise ApiError(400, "bad_zoom", "zoom must be within 0..19")
        visible = bbox_filter(state.hazard_store.located_sites(), box)
        clusters = cluster_sites(visible, zoom)
        body = []
        for cluster in clusters:
            entry = {
                "centroid": {"lat": cluster.centroid.lat, "lon": cluster.centroid.lon},
                "count": cluster.count,
                "member_ids": cluster.member_ids,
            }
            if cluster.count == 1:
                site = state.hazard_store.get(cluster.member_ids[0])
                entry["site"] = {
                    "site_id": site.site_id,
                    "name": site.name,
                    "contact_name": site.contact_name,
                    "address": site.address,
                    "location": {"lat": site.location.lat, "lon": site.location.lon},
                    "epa_url": site.epa_url,
                }
            body.append(entry)
        return body

    @app.post("/api/reports", status_code=201)
    async def submit_report(request: Request):
        try:
            payload = await request.json()
        except Exception:
            raise ApiError(400, "validation_error", "request body must be JSON") from None
        if not isinstance(payload, dict):
            raise ApiError(400, "validation_error", "request body must be a JSON object")
        location = payload.get("location")
        if not isinstance(location, dict):
            location = {"lat": payload.get("lat"), "lon": payload.get("lon")}
        report = state.report_store.submit(
            lat=location.get("lat"),
            lon=location.get("lon"),
            category=payload.get("category"),
            description=payload.get("description"),
            reporter_contact=payload.get("reporter_contact"),
        )
        return report_payload(report)

    @app.get("/api/reports")
    def list_reports(request: Request):
        token = state.config.admin_token
        if not token:
            raise ApiError(404, "admin_disabled", "report listing is not enabled on this deployment")
        supplied = request.headers.get("Authorization", "")
        if supplied != f"Bearer {token}":
            raise ApiError(401, "unauthorized", "missing or invalid admin token")
        params = request.query_params
        bbox = _parse_bbox(params["bbox"]) if "bbox" in params else None
        t_from = _parse_instant(params["from"], "from") if "from" in params else None
        t_to = _parse_instant(params["to"], "to") if "to" in params else None
        status = params.get("status")
        if status is not None and status not in ("new", "reviewed"):
            raise ApiError(400, "validation_error", "status must be new or reviewed")
        results = state.report_store.list(status=status, bbox=bbox, t_from=t_from, t_to=t_to)
        if params.get("format") == "csv":
            return PlainTextResponse(reports_to_csv(results), media_type="text/csv")
        return [report_payload(r) for r in results]

    @app.get("/api/meta/colorscale")
    def colorscale():
        return state.scale.to_dict()

    @app.get("/healthz")
    def healthz():
        now = state.clock.now()
        if not state.ready():
            raise ApiError(503, "not_ready", "no poll cycle has completed yet")
        online = sum(
            1 for sid in state.sensor_order()
            if sensor_summary_payload(state, sid, now)["online"]
        )
        last_poll = state.last_poll_at()
        return {
            "status": "ok",
            "sensors_online": online,
            "last_poll_at": None if last_poll is None else to_iso8601(last_poll),
        }

    return app


def report_payload(report) -> dict:
    return {
        "id": report.id,
        "location": {"lat": report.location.lat, "lon": report.location.lon},
        "category": report.category,
        "description": report.description,
        "reporter_contact": report.reporter_contact,
        "created_at": to_iso8601(report.created_at),
        "status": report.status,
    }
