// The info card must show exactly what the API said — every displayed value
// is compared byte-for-byte against the corresponding response field.

import { beforeAll, expect, inject, test } from "vitest";

import { AirwatchClient } from "../src/api";
import { DEFAULT_WINDOW, fetchFailedHtml, infoCardHtml, infoCardModel } from "../src/infocard";
import type { SensorSummaryJson } from "../src/types";

let client: AirwatchClient;
let summaries: SensorSummaryJson[];

beforeAll(async () => {
  client = new AirwatchClient(inject("baseUrl"));
  summaries = await client.sensors();
});

test("card fields byte-match the detail response for every sensor", async () => {
  for (const listed of summaries) {
    const body = await client.sensor(listed.sensor_id);
    const model = infoCardModel(body);

    expect(model.sensorId).toBe(body.sensor_id);
    expect(model.name).toBe(body.name);
    expect(model.online).toBe(body.online);
    expect(model.date).toBe(body.current!.timestamp);
    expect(model.category).toBe(body.current!.category);
    expect(model.guidance).toBe(body.current!.guidance);

    const chosen = body.windows.find((w) => w.window === DEFAULT_WINDOW)!;
    expect(model.defaultWindow).toBe(DEFAULT_WINDOW);
    expect(model.defaultValue).toBe(chosen.mean_concentration);
    expect(model.defaultAqi).toBe(chosen.aqi);

    // the per-window table is the payload verbatim, not a reformatted copy
    expect(model.windows).toBe(body.windows);
    expect(JSON.stringify(model.windows)).toBe(JSON.stringify(body.windows));
  }
});

test("rendered card contains the verbatim date, value, and guidance", async () => {
  const body = await client.sensor(summaries[0].sensor_id);
  const html = infoCardHtml(infoCardModel(body));
  expect(html).toContain(body.current!.timestamp);
  expect(html).toContain(String(body.current!.guidance));
  const chosen = body.windows.find((w) => w.window === DEFAULT_WINDOW)!;
  expect(html).toContain(`${chosen.mean_concentration} µg/m³`);
  expect(html).toContain(`data-sensor="${body.sensor_id}"`);
  expect(html).toContain("to-chart"); // the switch-to-history button
});

test("sensor with no current reading still yields a usable card", () => {
  const silent: SensorSummaryJson = {
    sensor_id: "silent",
    name: "Silent sensor",
    location: null,
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
  const model = infoCardModel(silent);
  expect(model.date).toBeNull();
  expect(model.defaultValue).toBeNull();
  const html = infoCardHtml(model);
  expect(html).toContain("No readings yet");
});

test("fetch failure renders a retry affordance, not a blank popup", () => {
  const html = fetchFailedHtml("90121", "connection refused");
  expect(html).toContain("Retry");
  expect(html).toContain("connection refused");
  expect(html.length).toBeGreaterThan(40);
});
