"""EPA AQI computation for PM2.5, health categories, and the stoplight color scale.

The breakpoint table, category guidance, and color anchors are plain data:
the built-in defaults below can be replaced by loading a JSON document with
the same shape (see ``AqiScale.from_dict``), and the service republishes the
loaded scale verbatim at /api/meta/colorscale so clients never duplicate it.

Table values are the pre-2024 EPA PM2.5 standard (Good tops out at 12.0
ug/m3). The 2024 revision can be swapped in via configuration.
"""

import math
from dataclasses import dataclass
from decimal import Decimal, ROUND_DOWN

ColorRgb = tuple[int, int, int]

AQI_MAX = 500


@dataclass(frozen=True)
class Breakpoint:
    conc_low: float
    conc_high: float
    index_low: int
    index_high: int
    category: str


@dataclass(frozen=True)
class Category:
    name: str
    label: str
    index_low: int
    index_high: int
    guidance: str
    color: ColorRgb


DEFAULT_BREAKPOINTS = [
    Breakpoint(0.0, 12.0, 0, 50, "Good"),
    Breakpoint(12.1, 35.4, 51, 100, "Moderate"),
    Breakpoint(35.5, 55.4, 101, 150, "UnhealthyForSensitiveGroups"),
    Breakpoint(55.5, 150.4, 151, 200, "Unhealthy"),
    Breakpoint(150.5, 250.4, 201, 300, "VeryUnhealthy"),
    Breakpoint(250.5, 350.4, 301, 400, "Hazardous"),
    Breakpoint(350.5, 500.4, 401, 500, "Hazardous"),
]

DEFAULT_CATEGORIES = [
    Category(
        "Good", "Good", 0, 50,
        "Air quality is satisfactory, and air pollution poses little or no risk.",
        (0, 228, 0),
    ),
    Category(
        "Moderate", "Moderate", 51, 100,
        "Air quality is acceptable. However, there may be a risk for some people, "
        "particularly those who are unusually sensitive to air pollution.",
        (255, 255, 0),
    ),
    Category(
        "UnhealthyForSensitiveGroups", "Unhealthy for Sensitive Groups", 101, 150,
        "Members of sensitive groups may experience health effects. The general "
        "public is less likely to be affected.",
        (255, 126, 0),
    ),
    Category(
        "Unhealthy", "Unhealthy", 151, 200,
        "Some members of the general public may experience health effects; "
        "members of sensitive groups may experience more serious health effects.",
        (255, 0, 0),
    ),
    Category(
        "VeryUnhealthy", "Very Unhealthy", 201, 300,
        "Health alert: The risk of health effects is increased for everyone.",
        (143, 63, 151),
    ),
    Category(
        "Hazardous", "Hazardous", 301, 500,
        "Health warning of emergency conditions: everyone is more likely to be affected.",
        (126, 0, 35),
    ),
]

# Marker fill gradient (stoplight green -> yellow -> red); clamps red above 200.
DEFAULT_COLOR_ANCHORS = [
    (0, (0, 228, 0)),
    (100, (255, 255, 0)),
    (200, (255, 0, 0)),
]


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def color_to_hex(color: ColorRgb) -> str:
    return "#{:02X}{:02X}{:02X}".format(*color)


def hex_to_color(text: str) -> ColorRgb:
    value = text.lstrip("#")
    return (int(value[0:2], 16), int(value[2:4], 16), int(value[4:6], 16))


def truncate_concentration(concentration: float) -> float:
    """Discard digits beyond one decimal place (floor to 0.1 granularity).

    EPA's AQI procedure truncates PM2.5 to one decimal before interpolating.
    Goes through Decimal on the shortest repr so values like 35.4, whose
    binary form sits a hair below, don't get knocked down a step.
    """
    c = float(concentration)
    if not math.isfinite(c) or c < 0:
        raise ValueError(f"concentration must be a finite value >= 0, got {concentration!r}")
    return float(Decimal(str(c)).quantize(Decimal("0.1"), rounding=ROUND_DOWN))


class AqiScale:
    """One loaded set of breakpoints, categories, and marker-color anchors."""

    def __init__(self, breakpoints=None, categories=None, color_anchors=None):
        self.breakpoints = list(breakpoints if breakpoints is not None else DEFAULT_BREAKPOINTS)
        self.categories = list(categories if categories is not None else DEFAULT_CATEGORIES)
        self.color_anchors = [
            (int(a), (int(r), int(g), int(b)))
            for a, (r, g, b) in (color_anchors if color_anchors is not None else DEFAULT_COLOR_ANCHORS)
        ]
        self._validate()

    def _validate(self):
        if not self.breakpoints or not self.categories or len(self.color_anchors) < 2:
            raise ValueError("scale needs breakpoints, categories, and >= 2 color anchors")
        for row in self.breakpoints:
            if row.conc_low > row.conc_high or row.index_low > row.index_high:
                raise ValueError(f"inverted breakpoint row: {row}")
        for prev, nxt in zip(self.breakpoints, self.breakpoints[1:]):
            if abs(nxt.conc_low - (prev.conc_high + 0.1)) > 1e-9 or nxt.index_low != prev.index_high + 1:
                raise ValueError(f"breakpoints not contiguous: {prev} -> {nxt}")
        cats = sorted(self.categories, key=lambda c: c.index_low)
        if cats[0].index_low != 0 or cats[-1].index_high != AQI_MAX:
            raise ValueError("categories must tile the full index range")
        for prev, nxt in zip(cats, cats[1:]):
            if nxt.index_low != prev.index_high + 1:
                raise ValueError(f"category ranges must tile without gaps: {prev.name} -> {nxt.name}")
        for cat in cats:
            if not cat.guidance:
                raise ValueError(f"category {cat.name} has empty guidance")
        anchors = sorted(a for a, _ in self.color_anchors)
        if anchors != [a for a, _ in self.color_anchors]:
            raise ValueError("color anchors must be sorted by AQI")

    def pm25_to_aqi(self, concentration: float) -> int:
        """Convert a PM2.5 concentration (ug/m3) to an integer AQI.

        Truncates to one decimal, linearly interpolates within the containing
        breakpoint row, rounds half-up. Concentrations above the top row
        clamp to the top of the scale (EPA calls these "Beyond the AQI").
        """
        c = truncate_concentration(concentration)
        top = self.breakpoints[-1]
        if c > top.conc_high:
            return top.index_high
        for row in self.breakpoints:
            if row.conc_low <= c <= row.conc_high:
                slope = (row.index_high - row.index_low) / (row.conc_high - row.conc_low)
                return round_half_up(slope * (c - row.conc_low) + row.index_low)
        raise ValueError(f"no breakpoint row contains {c}")

    def category_for(self, aqi: int) -> Category:
        if not 0 <= aqi <= AQI_MAX:
            raise ValueError(f"AQI must be within 0..{AQI_MAX}, got {aqi}")
        for cat in self.categories:
            if cat.index_low <= aqi <= cat.index_high:
                return cat
        raise ValueError(f"no category contains AQI {aqi}")

    def marker_color(self, aqi: int) -> ColorRgb:
        """Stoplight fill color for an AQI value (piecewise-linear over anchors)."""
        if not 0 <= aqi <= AQI_MAX:
            raise ValueError(f"AQI must be within 0..{AQI_MAX}, got {aqi}")
        anchors = self.color_anchors
        if aqi <= anchors[0][0]:
            return anchors[0][1]
        if aqi >= anchors[-1][0]:
            return anchors[-1][1]
        for (a0, c0), (a1, c1) in zip(anchors, anchors[1:]):
            if a0 <= aqi <= a1:
                t = (aqi - a0) / (a1 - a0)
                return tuple(round_half_up(lo + t * (hi - lo)) for lo, hi in zip(c0, c1))
        raise AssertionError("unreachable: anchors are sorted")

    def concentration_bands(self) -> list[dict]:
        """Category ranges mapped into concentration space (chart backgrounds)."""
        bands = []
        for cat in self.categories:
            rows = [
                row for row in self.breakpoints
                if row.index_low >= cat.index_low and row.index_high <= cat.index_high
            ]
            if not rows:
                continue
            bands.append({
                "category": cat.name,
                "label": cat.label,
                "conc_low": rows[0].conc_low,
                "conc_high": rows[-1].conc_high,
                "index_low": cat.index_low,
                "index_high": cat.index_high,
                "color": color_to_hex(cat.color),
            })
        return bands

    def to_dict(self) -> dict:
        return {
            "breakpoints": [
                {
                    "conc_low": row.conc_low,
                    "conc_high": row.conc_high,
                    "index_low": row.index_low,
                    "index_high": row.index_high,
                    "category": row.category,
                }
                for row in self.breakpoints
            ],
            "categories": [
                {
                    "name": cat.name,
                    "label": cat.label,
                    "index_low": cat.index_low,
                    "index_high": cat.index_high,
                    "guidance": cat.guidance,
                    "color": color_to_hex(cat.color),
                }
                for cat in self.categories
            ],
            "color_anchors": [
                {"aqi": aqi, "color": color_to_hex(color)} for aqi, color in self.color_anchors
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AqiScale":
        breakpoints = [
            Breakpoint(
                float(row["conc_low"]), float(row["conc_high"]),
                int(row["index_low"]), int(row["index_high"]),
                str(row["category"]),
            )
            for row in data["breakpoints"]
        ]
        categories = [
            Category(
                str(cat["name"]), str(cat.get("label", cat["name"])),
                int(cat["index_low"]), int(cat["index_high"]),
                str(cat["guidance"]), hex_to_color(cat["color"]),
            )
            for cat in data["categories"]
        ]
        anchors = [(int(a["aqi"]), hex_to_color(a["color"])) for a in data["color_anchors"]]
        return cls(breakpoints, categories, anchors)


DEFAULT_SCALE = AqiScale()


def pm25_to_aqi(concentration: float) -> int:
    return DEFAULT_SCALE.pm25_to_aqi(concentration)


def aqi_category(aqi: int) -> Category:
    return DEFAULT_SCALE.category_for(aqi)


def marker_color(aqi: int) -> ColorRgb:
    return DEFAULT_SCALE.marker_color(aqi)
