// Application entry point: a leaflet map showing sensor glyphs, with the
// overlay panel (sensor picker, Find Me, report form), the optional hazard
// layer, info-card popups, and a 60 s refresh loop. All data and all colors
// come from the airwatch API.

import L from "leaflet";
import "leaflet/dist/leaflet.css";

import { AirwatchClient } from "./api";
import { ChartView } from "./chart";
import { markerModel, markerSvg, ringLegendHtml } from "./glyphs";
import { HazardLayerController, clusterBadgeHtml, sitePopupHtml } from "./hazards";
import { fetchFailedHtml, infoCardHtml, infoCardModel } from "./infocard";
import { findMe, sensorOptions, submitReport } from "./overlay";
import { initialViewState } from "./state";
import type { BBox, SensorSummaryJson } from "./types";

interface AppSettings {
  apiBase?: string;
  tilesUrl?: string;
  tilesAttribution?: string;
  center?: { lat: number; lon: number };
  zoom?: number;
}

declare global {
  interface Window {
    AIRWATCH?: AppSettings;
  }
}

const settings = window.AIRWATCH ?? {};
const client = new AirwatchClient(settings.apiBase ?? "");
// Kansas City metro by default — the service area this deployment covers.
const startCenter = settings.center ?? { lat: 39.08, lon: -94.58 };
const state = initialViewState(startCenter, settings.zoom ?? 12);

const map = L.map("map").setView([state.center.lat, state.center.lon], state.zoom);
L.tileLayer(settings.tilesUrl ?? "https://tile.openstreetmap.org/{z}/{x}/{y}.png", {
  attribution:
    settings.tilesAttribution ?? '&copy; <a href="https://www.openstreetmap.org/copyright">OpenStreetMap</a>',
  maxZoom: 19,
}).addTo(map);

const sensorLayer = L.layerGroup().addTo(map);
const hazardLayer = L.layerGroup();
let summaries: SensorSummaryJson[] = [];

function mapBBox(): BBox {
  const b = map.getBounds();
  return {
    minLon: b.getWest(),
    minLat: b.getSouth(),
    maxLon: b.getEast(),
    maxLat: b.getNorth(),
  };
}

// ---- sensor glyphs -------------------------------------------------------

function renderSensors(): void {
  sensorLayer.clearLayers();
  for (const summary of summaries) {
    if (state.hiddenSensors.has(summary.sensor_id)) continue;
    if (summary.location === null) continue; // nothing to place without coordinates
    const model = markerModel(summary);
    const size = 72;
    const icon = L.divIcon({
      html: markerSvg(model, size),
      className: "sensor-glyph",
      iconSize: [size, size],
      iconAnchor: [size / 2, size / 2],
    });
    const marker = L.marker([summary.location.lat, summary.location.lon], { icon });
    marker.bindPopup(`<div class="info-card">Loading…</div>`, { minWidth: 280 });
    marker.on("popupopen", () => void openInfoCard(marker, summary.sensor_id));
    marker.addTo(sensorLayer);
  }
}

async function openInfoCard(marker: L.Marker, sensorId: string): Promise<void> {
  state.selectedSensor = sensorId;
  state.activePopup = "info_card";
  try {
    const detail = await client.sensor(sensorId);
    marker.setPopupContent(infoCardHtml(infoCardModel(detail, state.displayWindow)));
    bindPopupButtons(marker, sensorId);
  } catch (err) {
    const message = err instanceof Error ? err.message : "request failed";
    marker.setPopupContent(fetchFailedHtml(sensorId, message));
    bindPopupButtons(marker, sensorId);
  }
}

function bindPopupButtons(marker: L.Marker, sensorId: string): void {
  const popupEl = marker.getPopup()?.getElement();
  if (!popupEl) return;
  popupEl.querySelector(".retry")?.addEventListener("click", () => {
    void openInfoCard(marker, sensorId);
  });
  popupEl.querySelector(".to-chart")?.addEventListener("click", () => {
    void openChart(sensorId);
  });
}

async function openChart(sensorId: string): Promise<void> {
  state.activePopup = "line_chart";
  const panel = document.getElementById("chart-panel")!;
  panel.hidden = false;
  panel.innerHTML = `<div class="chart-head">Loading…</div>`;
  try {
    const series = await client.timeseries(sensorId, { maxPoints: 500 });
    const name = summaries.find((s) => s.sensor_id === sensorId)?.name ?? sensorId;
    const host = document.createElement("div");
    panel.innerHTML = "";
    panel.appendChild(closeButton(() => {
      panel.hidden = true;
      state.activePopup = "none";
    }));
    panel.appendChild(host);
    new ChartView(host, series, name);
  } catch (err) {
    const message = err instanceof Error ? err.message : "request failed";
    panel.innerHTML = "";
    panel.appendChild(closeButton(() => (panel.hidden = true)));
    const note = document.createElement("p");
    note.textContent = `Could not load the chart: ${message}`;
    const retry = document.createElement("button");
    retry.textContent = "Retry";
    retry.addEventListener("click", () => void openChart(sensorId));
    panel.append(note, retry);
  }
}

function closeButton(onClose: () => void): HTMLButtonElement {
  const btn = document.createElement("button");
  btn.className = "panel-close";
  btn.textContent = "×";
  btn.setAttribute("aria-label", "close");
  btn.addEventListener("click", onClose);
  return btn;
}

// ---- overlay panel -------------------------------------------------------

function rebuildOverlay(): void {
  const options = sensorOptions(summaries);

  const picker = document.getElementById("sensor-picker") as HTMLSelectElement;
  picker.innerHTML =
    `<option value="">Go to sensor…</option>` +
    options
      .map((o) => `<option value="${o.id}">${o.name.replace(/</g, "&lt;")}</option>`)
      .join("");
  picker.onchange = () => {
    const chosen = options.find((o) => o.id === picker.value);
    if (chosen && chosen.lat !== null && chosen.lon !== null) {
      map.flyTo([chosen.lat, chosen.lon], Math.max(map.getZoom(), 14));
      state.selectedSensor = chosen.id;
    }
  };

  const checklist = document.getElementById("sensor-visibility")!;
  checklist.innerHTML = "";
  for (const o of options) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = !state.hiddenSensors.has(o.id);
    box.addEventListener("change", () => {
      if (box.checked) state.hiddenSensors.delete(o.id);
      else state.hiddenSensors.add(o.id);
      renderSensors();
    });
    label.append(box, ` ${o.name}`);
    checklist.appendChild(label);
  }

  const windows = summaries[0]?.windows.map((w) => w.window) ?? [];
  const windowPicker = document.getElementById("window-picker") as HTMLSelectElement;
  windowPicker.innerHTML = windows
    .map(
      (w) =>
        `<option value="${w}"${w === state.displayWindow ? " selected" : ""}>${w}</option>`,
    )
    .join("");
  windowPicker.onchange = () => {
    state.displayWindow = windowPicker.value;
  };

  const legendHost = document.getElementById("ring-legend")!;
  legendHost.innerHTML = ringLegendHtml(windows);
}

function wireFindMe(): void {
  const button = document.getElementById("find-me")!;
  const notice = document.getElementById("overlay-notice")!;
  button.addEventListener("click", () => {
    void findMe(navigator.geolocation).then((result) => {
      if (result.ok) {
        notice.textContent = "";
        map.flyTo([result.lat, result.lon], Math.max(map.getZoom(), 14));
      } else {
        notice.textContent = result.notice; // map stays where it was
      }
    });
  });
}

function wireReportForm(): void {
  const form = document.getElementById("report-form") as HTMLFormElement;
  const status = document.getElementById("report-status")!;
  // clicking the map fills the report coordinates
  map.on("click", (e: L.LeafletMouseEvent) => {
    (form.elements.namedItem("lat") as HTMLInputElement).value = e.latlng.lat.toFixed(5);
    (form.elements.namedItem("lon") as HTMLInputElement).value = e.latlng.lng.toFixed(5);
  });
  form.addEventListener("submit", (e) => {
    e.preventDefault();
    const data = new FormData(form);
    const draft = {
      lat: Number(data.get("lat")),
      lon: Number(data.get("lon")),
      category: String(data.get("category") ?? ""),
      description: String(data.get("description") ?? ""),
      reporter_contact: String(data.get("contact") ?? "") || undefined,
    };
    void submitReport(client, draft).then((outcome) => {
      form.querySelectorAll(".field-error").forEach((el) => el.remove());
      if (outcome.ok) {
        status.textContent = `Report received — id ${outcome.report.id}`;
        form.reset();
        return;
      }
      status.textContent = outcome.message;
      for (const [field, message] of Object.entries(outcome.fields)) {
        const input = form.querySelector(`[data-field="${field}"]`);
        if (!input) continue;
        const note = document.createElement("div");
        note.className = "field-error";
        note.textContent = message;
        input.insertAdjacentElement("afterend", note);
      }
    });
  });
}

// ---- hazard layer --------------------------------------------------------

const hazardController = new HazardLayerController(
  (bbox, zoom) => client.hazards(bbox, zoom),
  (clusters) => {
    hazardLayer.clearLayers();
    for (const cluster of clusters) {
      if (cluster.count === 1 && cluster.site) {
        const m = L.marker([cluster.site.location.lat, cluster.site.location.lon], {
          icon: L.divIcon({ html: clusterBadgeHtml(1), className: "hazard-icon" }),
        });
        m.bindPopup(sitePopupHtml(cluster.site));
        m.addTo(hazardLayer);
      } else {
        const m = L.marker([cluster.centroid.lat, cluster.centroid.lon], {
          icon: L.divIcon({
            html: clusterBadgeHtml(cluster.count),
            className: "hazard-icon",
          }),
        });
        m.addTo(hazardLayer);
      }
    }
    updateHazardBadge();
  },
);

function updateHazardBadge(): void {
  const badge = document.getElementById("hazard-stale")!;
  badge.hidden = !hazardController.stale;
}

function wireHazardToggle(): void {
  const toggle = document.getElementById("hazard-toggle") as HTMLInputElement;
  toggle.checked = state.hazardLayerOn; // off by default
  toggle.addEventListener("change", () => {
    state.hazardLayerOn = toggle.checked;
    hazardController.setEnabled(toggle.checked);
    if (toggle.checked) {
      hazardLayer.addTo(map);
      hazardController.viewportChanged(mapBBox(), map.getZoom());
    } else {
      map.removeLayer(hazardLayer);
      hazardLayer.clearLayers();
    }
  });
  map.on("moveend zoomend", () => {
    state.center = { lat: map.getCenter().lat, lon: map.getCenter().lng };
    state.zoom = map.getZoom();
    hazardController.viewportChanged(mapBBox(), map.getZoom());
    updateHazardBadge();
  });
}

// ---- refresh loop --------------------------------------------------------

async function refresh(): Promise<void> {
  try {
    summaries = await client.sensors();
    document.getElementById("load-error")!.hidden = true;
    renderSensors();
    rebuildOverlay();
  } catch {
    // keep the previous markers; data only changes once per poll cycle
    document.getElementById("load-error")!.hidden = false;
  }
}

wireFindMe();
wireReportForm();
wireHazardToggle();
void refresh();
setInterval(() => void refresh(), 60_000);
