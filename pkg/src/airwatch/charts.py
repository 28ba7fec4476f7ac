"""PM2.5 timeseries charts rendered to PNG files.

Charts pair with the CSV export: the same slice of readings goes out as
delimited rows for analysis and as a figure suitable for sharing as-is.
"""

from datetime import datetime, timezone
from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # headless; must precede pyplot import

import matplotlib.dates as mdates
import matplotlib.pyplot as plt

BAND_ALPHA = 0.25


def render_timeseries_png(
    points: list[tuple[int, float]],
    bands: list[dict],
    out_path,
    title: str = "PM2.5",
) -> Path:
    """Draw readings as a line over category-colored concentration bands.

    `points` are (epoch_secs, pm2_5) pairs in time order; `bands` is the
    colorscale's concentration-band list. Returns the written path.
    """
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)

    fig, ax = plt.subplots(figsize=(10, 4.5), dpi=100)
    try:
        values = [v for _, v in points]
        top = max(values, default=0.0) * 1.15

        for band in bands:
            if band["conc_low"] > max(top, 15.0):
                break
            ax.axhspan(
                band["conc_low"],
                min(band["conc_high"], max(top, 15.0)),
                color=band["color"],
                alpha=BAND_ALPHA,
                linewidth=0,
                label=band["label"],
            )

        if points:
            times = [datetime.fromtimestamp(ts, tz=timezone.utc) for ts, _ in points]
            ax.plot(times, values, color="#222222", linewidth=1.2)
            ax.xaxis.set_major_formatter(mdates.DateFormatter("%m-%d %H:%M", tz=timezone.utc))
            fig.autofmt_xdate()
        else:
            ax.text(0.5, 0.5, "no readings in range", transform=ax.transAxes,
                    ha="center", va="center", color="#666666")

        ax.set_ylim(0, max(top, 15.0))
        ax.set_ylabel("PM2.5 (µg/m³)")
        ax.set_title(title)
        ax.legend(loc="upper right", fontsize="x-small", framealpha=0.8)
        fig.tight_layout()
        fig.savefig(out_path)
    finally:
        plt.close(fig)
    return out_path
