"""Community pollution reports and hazardous-waste facility records.

Both stores journal to JSONL (reports.jsonl / hazards.jsonl) and rebuild
themselves from the journal on startup. Report submission is open to the
community; the review-status flag is the entire moderation workflow.
"""

import csv
import io
import logging
import uuid
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .errors import NotFoundError, ValidationError
from .geo import BoundingBox, GeoPoint
from .journal import append_record, read_records
from .timeutil import parse_iso8601, to_iso8601

logger = logging.getLogger(__name__)

REPORT_CATEGORIES = ("smoke", "odor", "dust", "industrial_emission", "other")
MAX_DESCRIPTION_CHARS = 2000

# Default service area: the Kansas City metro.
KC_SERVICE_AREA = BoundingBox(min_lon=-94.95, min_lat=38.8, max_lon=-94.35, max_lat=39.4)

HAZARD_CSV_COLUMNS = ("site_id", "name", "contact_name", "address", "latitude", "longitude", "epa_url")
REPORT_CSV_COLUMNS = ("id", "created_at", "status", "category", "lat", "lon", "description", "reporter_contact")


@dataclass(frozen=True)
class PollutionReport:
    id: str
    location: GeoPoint
    category: str
    description: str
    reporter_contact: Optional[str]
    created_at: int  # epoch seconds, server-assigned
    status: str  # "new" | "reviewed"

    def to_record(self) -> dict:
        record = {
            "id": self.id,
            "lat": self.location.lat,
            "lon": self.location.lon,
            "category": self.category,
            "description": self.description,
            "created_at": to_iso8601(self.created_at),
            "status": self.status,
        }
        if self.reporter_contact is not None:
            record["reporter_contact"] = self.reporter_contact
        return record

    @classmethod
    def from_record(cls, record: dict) -> "PollutionReport":
        created = record["created_at"]
        return cls(
            id=str(record["id"]),
            location=GeoPoint(float(record["lat"]), float(record["lon"])),
            category=str(record["category"]),
            description=str(record["description"]),
            reporter_contact=record.get("reporter_contact"),
            created_at=parse_iso8601(created) if isinstance(created, str) else int(created),
            status=str(record.get("status", "new")),
        )


@dataclass(frozen=True)
class HazardSite:
    site_id: str
    name: str
    contact_name: str
    address: str
    location: GeoPoint
    epa_url: str

    def to_record(self) -> dict:
        return {
            "site_id": self.site_id,
            "name": self.name,
            "contact_name": self.contact_name,
            "address": self.address,
            "lat": self.location.lat,
            "lon": self.location.lon,
            "epa_url": self.epa_url,
        }

    @classmethod
    def from_record(cls, record: dict) -> "HazardSite":
        return cls(
            site_id=str(record["site_id"]),
            name=str(record.get("name", "")),
            contact_name=str(record.get("contact_name", "")),
            address=str(record.get("address", "")),
            location=GeoPoint(float(record["lat"]), float(record["lon"])),
            epa_url=str(record.get("epa_url", "")),
        )


class ReportStore:
    """Append-only journal of community pollution reports."""

    def __init__(self, journal_path, clock, service_area: BoundingBox = KC_SERVICE_AREA):
        self.journal_path = Path(journal_path)
        self.clock = clock
        self.service_area = service_area
        self._reports: dict[str, PollutionReport] = {}
        for record in read_records(self.journal_path):
            report = PollutionReport.from_record(record)
            self._reports[report.id] = report

    def __len__(self) -> int:
        return len(self._reports)

    def submit(self, lat, lon, category, description, reporter_contact=None) -> PollutionReport:
        """Validate and durably store a new report. Id/created_at/status are server-assigned."""
        fields = {}
        location = None
        try:
            location = GeoPoint(float(lat), float(lon))
        except (TypeError, ValueError) as exc:
            fields["location"] = str(exc)
        if location is not None and not self.service_area.contains(location):
            box = self.service_area
            fields["location"] = (
                "location is outside the service area "
                f"(lat {box.min_lat}..{box.max_lat}, lon {box.min_lon}..{box.max_lon})"
            )
        if category not in REPORT_CATEGORIES:
            fields["category"] = f"category must be one of {', '.join(REPORT_CATEGORIES)}"
        if not description or not str(description).strip():
            fields["description"] = "description must not be empty"
        elif len(description) > MAX_DESCRIPTION_CHARS:
            fields["description"] = f"description exceeds {MAX_DESCRIPTION_CHARS} characters"
        if fields:
            raise ValidationError("invalid report submission", fields=fields)

        report = PollutionReport(
            id=uuid.uuid4().hex,
            location=location,
            category=category,
            description=str(description),
            reporter_contact=None if reporter_contact is None else str(reporter_contact),
            created_at=int(self.clock.now()),
            status="new",
        )
        append_record(self.journal_path, report.to_record())
        self._reports[report.id] = report
        return report

    def mark_reviewed(self, report_id: str) -> PollutionReport:
        """Flip a report to reviewed (the only allowed transition)."""
        try:
            report = self._reports[report_id]
        except KeyError:
            raise NotFoundError(f"unknown report {report_id!r}") from None
        if report.status == "reviewed":
            return report
        updated = replace(report, status="reviewed")
        append_record(self.journal_path, updated.to_record())
        self._reports[report_id] = updated
        return updated

    def list(self, status=None, bbox: Optional[BoundingBox] = None,
             t_from=None, t_to=None) -> list[PollutionReport]:
        """Reports matching every supplied predicate, newest first, ties by id."""
        out = []
        for report in self._reports.values():
            if status is not None and report.status != status:
                continue
            if bbox is not None and not bbox.contains(report.location):
                continue
            if t_from is not None and report.created_at < t_from:
                continue
            if t_to is not None and report.created_at > t_to:
                continue
            out.append(report)
        out.sort(key=lambda r: (-r.created_at, r.id))
        return out

    def get(self, report_id: str) -> PollutionReport:
        try:
            return self._reports[report_id]
        except KeyError:
            raise NotFoundError(f"unknown report {report_id!r}") from None


def reports_to_csv(reports) -> str:
    """Serialize reports for evidence sharing; columns mirror the report fields."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(REPORT_CSV_COLUMNS)
    for r in reports:
        writer.writerow([
            r.id, to_iso8601(r.created_at), r.status, r.category,
            r.location.lat, r.location.lon, r.description, r.reporter_contact or "",
        ])
    return buf.getvalue()


class HazardStore:
    """Hazardous-waste facility records, keyed by site_id, journal-backed."""

    def __init__(self, journal_path):
        self.journal_path = Path(journal_path)
        self._sites: dict[str, HazardSite] = {}
        for record in read_records(self.journal_path):
            site = HazardSite.from_record(record)
            self._sites[site.site_id] = site

    def __len__(self) -> int:
        return len(self._sites)

    def upsert(self, site: HazardSite) -> None:
        append_record(self.journal_path, site.to_record())
        self._sites[site.site_id] = site

    def get(self, site_id: str) -> HazardSite:
        try:
            return self._sites[site_id]
        except KeyError:
            raise NotFoundError(f"unknown hazard site {site_id!r}") from None

    def sites(self) -> list[HazardSite]:
        return [self._sites[k] for k in sorted(self._sites)]

    def located_sites(self) -> list[tuple[str, GeoPoint]]:
        return [(s.site_id, s.location) for s in self.sites()]

    def import_csv(self, path) -> tuple[int, list[tuple[int, str]]]:
        """Import an EPA-style facility CSV. Returns (imported count, row errors).

        Rows with a missing site_id or unusable coordinates are skipped and
        reported by row number. A site_id repeated within the file wins with
        its last row.
        """
        path = Path(path)
        try:
            fh = path.open("r", encoding="utf-8", newline="")
        except OSError as exc:
            raise ValidationError(f"cannot read hazard CSV {path}: {exc}") from exc

        imported = 0
        errors: list[tuple[int, str]] = []
        seen_ids: set[str] = set()
        with fh:
            reader = csv.DictReader(fh)
            missing = [c for c in HAZARD_CSV_COLUMNS if c not in (reader.fieldnames or [])]
            if missing:
                raise ValidationError(f"hazard CSV missing columns: {', '.join(missing)}")
            for row_no, row in enumerate(reader, start=2):  # row 1 is the header
                site_id = (row.get("site_id") or "").strip()
                if not site_id:
                    errors.append((row_no, "missing site_id"))
                    continue
                try:
                    location = GeoPoint(float(row["latitude"]), float(row["longitude"]))
                except (TypeError, ValueError) as exc:
                    errors.append((row_no, f"bad coordinates: {exc}"))
                    continue
                if site_id in seen_ids:
                    logger.warning("duplicate site_id %s in %s row %d; last row wins", site_id, path, row_no)
                seen_ids.add(site_id)
                self.upsert(HazardSite(
                    site_id=site_id,
                    name=(row.get("name") or "").strip(),
                    contact_name=(row.get("contact_name") or "").strip(),
                    address=(row.get("address") or "").strip(),
                    location=location,
                    epa_url=(row.get("epa_url") or "").strip(),
                ))
                imported += 1
        return imported, errors
