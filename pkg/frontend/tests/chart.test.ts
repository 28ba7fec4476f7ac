// Chart background bands must agree with the colorscale endpoint, and the
// chart geometry has to survive zooming and empty data.

import { beforeAll, expect, inject, test } from "vitest";

import { AirwatchClient } from "../src/api";
import { chartModel, chartSvg, nearestPoint } from "../src/chart";
import type { ColorscaleJson, TimeseriesJson } from "../src/types";
import { SENSORS } from "./globalSetup";

let client: AirwatchClient;
let series: TimeseriesJson;
let scale: ColorscaleJson;

beforeAll(async () => {
  client = new AirwatchClient(inject("baseUrl"));
  series = await client.timeseries(SENSORS[1].id, { maxPoints: 400 });
  scale = await client.colorscale();
});

test("series bands match the colorscale categories exactly", () => {
  const byName = new Map(scale.categories.map((c) => [c.name, c]));
  expect(series.bands.length).toBeGreaterThan(0);
  for (const band of series.bands) {
    const category = byName.get(band.category);
    expect(category, `colorscale lists ${band.category}`).toBeDefined();
    expect(band.color).toBe(category!.color);
    expect(band.label).toBe(category!.label);
    expect(band.index_low).toBe(category!.index_low);
    expect(band.index_high).toBe(category!.index_high);
    // concentration bounds are the breakpoints covering the category range
    const rows = scale.breakpoints.filter(
      (r) => r.index_low >= category!.index_low && r.index_high <= category!.index_high,
    );
    expect(band.conc_low).toBe(rows[0].conc_low);
    expect(band.conc_high).toBe(rows[rows.length - 1].conc_high);
  }
});

test("rendered band rects carry the API colors into the SVG", () => {
  const model = chartModel(series);
  expect(model.empty).toBe(false);
  expect(model.bands.length).toBeGreaterThan(0);
  const svg = chartSvg(model);
  for (const band of model.bands) {
    expect(svg).toContain(`fill="${band.color}"`);
    expect(svg).toContain(`data-band="${band.category}"`);
  }
  // lower concentrations paint lower on the screen (larger y)
  for (let i = 1; i < model.bands.length; i++) {
    expect(model.bands[i].concLow).toBeGreaterThan(model.bands[i - 1].concLow);
    expect(model.bands[i].y1).toBeLessThanOrEqual(model.bands[i - 1].y1);
  }
  // visible bands never extend above the top of the plot area
  for (const band of model.bands) {
    expect(band.y0).toBeGreaterThanOrEqual(model.margin.top - 1e-9);
  }
});

test("every point is plotted and hover resolves the nearest one", () => {
  const model = chartModel(series);
  expect(model.points).toHaveLength(series.points.length);
  expect(model.pathD.startsWith("M")).toBe(true);
  const probe = model.points[Math.floor(model.points.length / 2)];
  const hit = nearestPoint(model, probe.x + 0.4);
  expect(hit).not.toBeNull();
  expect(hit!.timestamp).toBe(probe.timestamp);
  expect(hit!.value).toBe(probe.value);
});

test("box zoom restricts the domain to the selected range", () => {
  const full = chartModel(series);
  const third = Math.floor(full.points.length / 3);
  const range: [number, number] = [
    Date.parse(series.points[third].timestamp),
    Date.parse(series.points[2 * third].timestamp),
  ];
  const zoomed = chartModel(series, { xZoom: range });
  expect(zoomed.points.length).toBeLessThan(full.points.length);
  expect(zoomed.points.length).toBeGreaterThan(0);
  expect(zoomed.xDomain[0]).toBeGreaterThanOrEqual(range[0]);
  expect(zoomed.xDomain[1]).toBeLessThanOrEqual(range[1]);
  // bands still present after zooming
  expect(zoomed.bands.length).toBeGreaterThan(0);
});

test("empty series still renders bands plus an empty-data message", () => {
  const empty: TimeseriesJson = { ...series, points: [] };
  const model = chartModel(empty);
  expect(model.empty).toBe(true);
  expect(model.bands.length).toBeGreaterThan(0);
  const svg = chartSvg(model);
  expect(svg).toContain("no readings in range");
});
