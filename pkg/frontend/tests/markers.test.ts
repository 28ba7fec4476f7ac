// One marker per sensor, its colors and number lifted verbatim from the API.

import { beforeAll, describe, expect, inject, test } from "vitest";

import { AirwatchClient } from "../src/api";
import {
  NO_DATA_RING,
  OFFLINE_STROKE,
  markerModel,
  markerSvg,
  ringLegendHtml,
} from "../src/glyphs";
import type { SensorSummaryJson } from "../src/types";
import { SENSORS } from "./globalSetup";

let client: AirwatchClient;
let summaries: SensorSummaryJson[];

beforeAll(async () => {
  client = new AirwatchClient(inject("baseUrl"));
  summaries = await client.sensors();
});

describe("sensor glyphs from live summaries", () => {
  test("one marker model per sensor, all placeable", () => {
    expect(summaries).toHaveLength(SENSORS.length);
    const models = summaries.map(markerModel);
    expect(new Set(models.map((m) => m.sensorId)).size).toBe(SENSORS.length);
    for (const summary of summaries) {
      expect(summary.location).not.toBeNull(); // config supplies coordinates
    }
    for (const model of models) {
      expect(markerSvg(model).startsWith("<svg")).toBe(true);
    }
  });

  test("filled marker carries the API color and AQI number unchanged", () => {
    for (const summary of summaries) {
      const model = markerModel(summary);
      expect(model.kind).toBe("filled");
      expect(model.fillColor).toBe(summary.current!.color);
      expect(model.label).toBe(String(summary.current!.aqi));
      const svg = markerSvg(model);
      expect(svg).toContain(`fill="${summary.current!.color}"`);
      expect(svg).toContain(`>${summary.current!.aqi}</text>`);
    }
  });

  test("rings follow the API window order, innermost first", () => {
    for (const summary of summaries) {
      const model = markerModel(summary);
      expect(model.rings.map((r) => r.window)).toEqual(
        summary.windows.map((w) => w.window),
      );
      model.rings.forEach((ring, i) => {
        expect(ring.color).toBe(summary.windows[i].color);
      });
      // shortest interval is innermost: API order is ascending duration
      const durations = summary.windows.map((w) => w.duration_secs);
      expect([...durations].sort((a, b) => a - b)).toEqual(durations);
    }
  });

  test("ring legend names every window in order", () => {
    const windows = summaries[0].windows.map((w) => w.window);
    const html = ringLegendHtml(windows);
    let cursor = 0;
    for (const name of windows) {
      const at = html.indexOf(name, cursor);
      expect(at, `legend lists ${name} after the previous window`).toBeGreaterThan(-1);
      cursor = at;
    }
    expect(html).toContain("innermost");
  });
});

describe("degenerate markers", () => {
  test("sensor with no readings renders gray and hollow", () => {
    const offline: SensorSummaryJson = {
      sensor_id: "silent",
      name: "Silent sensor",
      location: { lat: 39.1, lon: -94.6 },
      online: false,
      current: null,
      windows: summaries[0].windows.map((w) => ({
        ...w,
        mean_concentration: null,
        aqi: null,
        color: null,
        sample_count: 0,
      })),
    };
    const model = markerModel(offline);
    expect(model.kind).toBe("offline");
    expect(model.fillColor).toBeNull();
    expect(model.label).toBe("offline");
    const svg = markerSvg(model);
    expect(svg).toContain(OFFLINE_STROKE);
    expect(svg).toContain(NO_DATA_RING); // empty windows drawn as neutral rings
    expect(svg).toContain(">offline</text>");
  });
});
