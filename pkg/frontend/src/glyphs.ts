// Sensor marker glyphs: a filled circle carrying the AQI number, wrapped in
// one concentric ring per averaging window (innermost = shortest window,
// matching the order the API sends). All colors come from the API payload;
// the only colors minted here are neutral grays for missing data.

import type { SensorSummaryJson, WindowSummaryJson } from "./types";

export const OFFLINE_STROKE = "#8a8a8a";
export const NO_DATA_RING = "#d9d9d9";

export interface RingModel {
  window: string;
  color: string | null; // null: no samples in this window yet
  sampleCount: number;
}

export interface MarkerModel {
  sensorId: string;
  name: string;
  kind: "filled" | "offline";
  fillColor: string | null; // current.color, verbatim
  label: string; // the centered number (AQI) or "offline"
  rings: RingModel[]; // innermost first
}

export function markerModel(summary: SensorSummaryJson): MarkerModel {
  const rings: RingModel[] = summary.windows.map((w: WindowSummaryJson) => ({
    window: w.window,
    color: w.color,
    sampleCount: w.sample_count,
  }));
  if (summary.current === null) {
    return {
      sensorId: summary.sensor_id,
      name: summary.name,
      kind: "offline",
      fillColor: null,
      label: "offline",
      rings,
    };
  }
  return {
    sensorId: summary.sensor_id,
    name: summary.name,
    kind: "filled",
    fillColor: summary.current.color,
    label: String(summary.current.aqi),
    rings,
  };
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

// Renders the glyph as a self-contained SVG string for a leaflet divIcon.
export function markerSvg(model: MarkerModel, sizePx = 72): string {
  const center = sizePx / 2;
  const coreRadius = sizePx * 0.17;
  const ringGap = (center - coreRadius - 2) / Math.max(model.rings.length, 1);

  const parts: string[] = [];
  model.rings.forEach((ring, i) => {
    const radius = coreRadius + ringGap * (i + 1);
    const stroke = ring.color ?? NO_DATA_RING;
    const dash = ring.color === null ? ' stroke-dasharray="2 3"' : "";
    parts.push(
      `<circle cx="${center}" cy="${center}" r="${radius.toFixed(1)}" ` +
        `fill="none" stroke="${escapeXml(stroke)}" stroke-width="${(ringGap * 0.6).toFixed(1)}"${dash}/>`,
    );
  });

  if (model.kind === "offline") {
    parts.push(
      `<circle cx="${center}" cy="${center}" r="${coreRadius}" fill="none" ` +
        `stroke="${OFFLINE_STROKE}" stroke-width="2"/>`,
    );
  } else {
    parts.push(
      `<circle cx="${center}" cy="${center}" r="${coreRadius}" ` +
        `fill="${escapeXml(model.fillColor ?? NO_DATA_RING)}" stroke="#333" stroke-width="1"/>`,
    );
  }

  const fontSize = model.kind === "offline" ? sizePx * 0.11 : sizePx * 0.16;
  parts.push(
    `<text x="${center}" y="${center}" text-anchor="middle" dominant-baseline="central" ` +
      `font-family="system-ui, sans-serif" font-size="${fontSize.toFixed(1)}" ` +
      `fill="${model.kind === "offline" ? OFFLINE_STROKE : "#111"}">${escapeXml(model.label)}</text>`,
  );

  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${sizePx}" height="${sizePx}" ` +
    `viewBox="0 0 ${sizePx} ${sizePx}" role="img" aria-label="sensor ${escapeXml(model.sensorId)}">` +
    parts.join("") +
    `</svg>`
  );
}

// The ring legend stays on screen permanently: readers repeatedly reported
// not knowing what the rings meant, so it is not collapsible.
export function ringLegendHtml(windowNames: string[]): string {
  const items = windowNames
    .map(
      (name, i) =>
        `<li><span class="legend-ring" data-ring="${i}"></span>${escapeXml(name)}</li>`,
    )
    .join("");
  return (
    `<div class="ring-legend"><strong>Rings, innermost to outermost</strong>` +
    `<ol>${items}</ol>` +
    `<p>Each ring is the average over that interval; the center number is the current AQI.</p></div>`
  );
}
