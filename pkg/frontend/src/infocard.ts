// Info card shown when a sensor marker is clicked. The model keeps every
// displayed value exactly as the API sent it — no rounding, no recomputation
// — so what the resident reads is what the service measured.

import type { SensorSummaryJson, WindowSummaryJson } from "./types";

export const DEFAULT_WINDOW = "10min";

export interface InfoCardModel {
  sensorId: string;
  name: string;
  online: boolean;
  date: string | null; // current.timestamp verbatim
  category: string | null;
  guidance: string | null;
  defaultWindow: string;
  defaultValue: number | null; // mean concentration of the default window
  defaultAqi: number | null;
  windows: WindowSummaryJson[]; // verbatim, API order
}

export function infoCardModel(
  detail: SensorSummaryJson,
  defaultWindow: string = DEFAULT_WINDOW,
): InfoCardModel {
  const chosen = detail.windows.find((w) => w.window === defaultWindow) ?? null;
  return {
    sensorId: detail.sensor_id,
    name: detail.name,
    online: detail.online,
    date: detail.current?.timestamp ?? null,
    category: detail.current?.category ?? null,
    guidance: detail.current?.guidance ?? null,
    defaultWindow,
    defaultValue: chosen?.mean_concentration ?? null,
    defaultAqi: chosen?.aqi ?? null,
    windows: detail.windows,
  };
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function windowRow(w: WindowSummaryJson): string {
  const value =
    w.mean_concentration === null ? "—" : `${w.mean_concentration} µg/m³`;
  const aqi = w.aqi === null ? "" : ` (AQI ${w.aqi})`;
  const swatch =
    w.color === null
      ? ""
      : `<span class="swatch" style="background:${escapeHtml(w.color)}"></span>`;
  return `<tr><td>${swatch}${escapeHtml(w.window)}</td><td>${escapeHtml(value)}${aqi}</td></tr>`;
}

export function infoCardHtml(model: InfoCardModel): string {
  const status = model.online ? "" : ` <span class="offline-tag">offline</span>`;
  const header = `<h3>${escapeHtml(model.name)}${status}</h3>`;
  const when =
    model.date === null
      ? `<p class="muted">No readings yet.</p>`
      : `<p class="card-date">${escapeHtml(model.date)}</p>`;
  const headline =
    model.defaultValue === null
      ? `<p class="muted">No ${escapeHtml(model.defaultWindow)} average available.</p>`
      : `<p class="headline">${model.defaultValue} µg/m³ <small>(${escapeHtml(model.defaultWindow)} average)</small></p>`;
  const guidance =
    model.guidance === null
      ? ""
      : `<p class="guidance"><strong>${escapeHtml(model.category ?? "")}.</strong> ${escapeHtml(model.guidance)}</p>`;
  const rows = model.windows.map(windowRow).join("");
  return (
    `<div class="info-card" data-sensor="${escapeHtml(model.sensorId)}">` +
    header +
    when +
    headline +
    guidance +
    `<table class="windows"><tbody>${rows}</tbody></table>` +
    `<button class="to-chart" data-sensor="${escapeHtml(model.sensorId)}">History chart</button>` +
    `</div>`
  );
}

// Fetch failures must never leave a blank popup — this is the body swapped
// in instead, with a hook the popup wiring binds to retry the fetch.
export function fetchFailedHtml(sensorId: string, message: string): string {
  return (
    `<div class="info-card error" data-sensor="${escapeHtml(sensorId)}">` +
    `<p>Could not load sensor data: ${escapeHtml(message)}</p>` +
    `<button class="retry" data-sensor="${escapeHtml(sensorId)}">Retry</button></div>`
  );
}
