"""Geodesic distance, Web-Mercator projection, and zoom-aware site clustering.

Spherical Earth model throughout; sub-meter accuracy is irrelevant at
neighborhood scale.
"""

import math
from dataclasses import dataclass, field

from .errors import NotFoundError, ValidationError

EARTH_RADIUS_M = 6_371_000.0
TILE_SIZE = 256
MERCATOR_LAT_LIMIT = 85.05113
DEFAULT_CLUSTER_RADIUS_PX = 80.0


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValidationError(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            raise ValidationError(f"longitude {self.lon} outside [-180, 180]")


@dataclass(frozen=True)
class PixelPoint:
    x: float
    y: float
    zoom: int


@dataclass(frozen=True)
class BoundingBox:
    min_lon: float
    min_lat: float
    max_lon: float
    max_lat: float

    def __post_init__(self):
        if self.min_lat > self.max_lat or self.min_lon > self.max_lon:
            raise ValidationError("bounding box is inverted (antimeridian boxes unsupported)")
        GeoPoint(self.min_lat, self.min_lon)
        GeoPoint(self.max_lat, self.max_lon)

    def contains(self, p: GeoPoint) -> bool:
        return self.min_lat <= p.lat <= self.max_lat and self.min_lon <= p.lon <= self.max_lon


@dataclass
class Cluster:
    centroid: GeoPoint
    member_ids: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.member_ids)


def haversine(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in meters."""
    lat1, lon1, lat2, lon2 = map(math.radians, (a.lat, a.lon, b.lat, b.lon))
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    h = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(math.sqrt(h))


def nearest_sensor(p: GeoPoint, sensors) -> tuple[str, float]:
    """(sensor_id, meters) of the closest sensor; ties go to the smallest id.

    `sensors` is an iterable of (sensor_id, GeoPoint).
    """
    best = None
    for sensor_id, location in sensors:
        d = haversine(p, location)
        if best is None or (d, sensor_id) < best:
            best = (d, sensor_id)
    if best is None:
        raise NotFoundError("no sensors to search")
    return best[1], best[0]


def project(p: GeoPoint, zoom: int) -> PixelPoint:
    """Web-Mercator pixel coordinates at `zoom` (256px tiles)."""
    if abs(p.lat) > MERCATOR_LAT_LIMIT:
        raise ValidationError(f"latitude {p.lat} beyond Web-Mercator limit")
    scale = TILE_SIZE * (2 ** zoom)
    phi = math.radians(p.lat)
    x = (p.lon + 180.0) / 360.0 * scale
    y = (1.0 - math.log(math.tan(phi) + 1.0 / math.cos(phi)) / math.pi) / 2.0 * scale
    return PixelPoint(x, y, zoom)


def unproject(px: PixelPoint) -> GeoPoint:
    scale = TILE_SIZE * (2 ** px.zoom)
    lon = px.x / scale * 360.0 - 180.0
    lat = math.degrees(math.atan(math.sinh(math.pi * (1.0 - 2.0 * px.y / scale))))
    return GeoPoint(lat, lon)


def pixel_distance(a: GeoPoint, b: GeoPoint, zoom: int) -> float:
    pa = project(a, zoom)
    pb = project(b, zoom)
    return math.hypot(pa.x - pb.x, pa.y - pb.y)


def cluster_sites(sites, zoom: int, radius_px: float = DEFAULT_CLUSTER_RADIUS_PX) -> list[Cluster]:
    """Greedy seed-absorption clustering in pixel space.

    Sites ((id, GeoPoint) pairs) are visited in ascending id order; each
    still-unassigned site seeds a cluster and absorbs every unassigned site
    within radius_px of it at `zoom`. Centroid is the plain mean of member
    coordinates. Deterministic for identical inputs; every id lands in
    exactly one cluster.
    """
    if radius_px <= 0:
        raise ValidationError("radius_px must be positive")
    ordered = sorted(sites, key=lambda s: s[0])
    assigned = set()
    clusters = []
    for i, (seed_id, seed_point) in enumerate(ordered):
        if seed_id in assigned:
            continue
        member_ids = [seed_id]
        lats = [seed_point.lat]
        lons = [seed_point.lon]
        assigned.add(seed_id)
        for other_id, other_point in ordered[i + 1:]:
            if other_id in assigned:
                continue
            if pixel_distance(seed_point, other_point, zoom) <= radius_px:
                member_ids.append(other_id)
                lats.append(other_point.lat)
                lons.append(other_point.lon)
                assigned.add(other_id)
        centroid = GeoPoint(sum(lats) / len(lats), sum(lons) / len(lons))
        clusters.append(Cluster(centroid=centroid, member_ids=member_ids))
    return clusters


def bbox_filter(sites, box: BoundingBox) -> list:
    """Sites inside the box (inclusive edges), input order preserved."""
    return [(site_id, p) for site_id, p in sites if box.contains(p)]
