// Report form round-trip: a valid submission lands as a 201 with an id, and
// validation failures come back as per-field messages.

import { beforeAll, expect, inject, test } from "vitest";

import { AirwatchClient, ApiError } from "../src/api";
import { findMe, sensorOptions, submitReport } from "../src/overlay";
import { SENSORS } from "./globalSetup";

let client: AirwatchClient;

beforeAll(() => {
  client = new AirwatchClient(inject("baseUrl"));
});

test("valid report round-trips to a created record", async () => {
  const outcome = await submitReport(client, {
    lat: 39.055,
    lon: -94.553,
    category: "smoke",
    description: "thick smoke drifting from the rail yard",
    reporter_contact: "neighbor@example.org",
  });
  expect(outcome.ok).toBe(true);
  if (!outcome.ok) return;
  expect(outcome.report.id).toMatch(/^[0-9a-f]{32}$/);
  expect(outcome.report.status).toBe("new");
  expect(outcome.report.category).toBe("smoke");
  expect(outcome.report.description).toBe("thick smoke drifting from the rail yard");
  expect(outcome.report.location.lat).toBeCloseTo(39.055, 10);
});

test("the raw endpoint answers 201 for a valid body", async () => {
  // submitReport hides the status code; check the contract directly
  const response = await fetch(`${inject("baseUrl")}/api/reports`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({
      lat: 39.1,
      lon: -94.6,
      category: "odor",
      description: "sulfur smell near the creek",
    }),
  });
  expect(response.status).toBe(201);
  const body = await response.json();
  expect(typeof body.id).toBe("string");
});

test("rejected report surfaces field-level messages for the form", async () => {
  const outcome = await submitReport(client, {
    lat: 0,
    lon: 0,
    category: "aliens",
    description: "",
  });
  expect(outcome.ok).toBe(false);
  if (outcome.ok) return;
  expect(Object.keys(outcome.fields).sort()).toEqual([
    "category",
    "description",
    "location",
  ]);
  for (const message of Object.values(outcome.fields)) {
    expect(message.length).toBeGreaterThan(0);
  }
});

test("ApiError carries the service's code for non-validation failures", async () => {
  await expect(client.sensor("nope")).rejects.toMatchObject({
    status: 404,
    code: "sensor_not_found",
  } satisfies Partial<ApiError>);
});

test("sensor picker options map names to coordinates", async () => {
  const summaries = await client.sensors();
  const options = sensorOptions(summaries);
  expect(options).toHaveLength(SENSORS.length);
  const byId = new Map(SENSORS.map((s) => [s.id, s]));
  for (const option of options) {
    const spec = byId.get(option.id)!;
    expect(option.name).toBe(spec.name);
    expect(option.lat).toBeCloseTo(spec.lat, 6);
    expect(option.lon).toBeCloseTo(spec.lon, 6);
  }
});

test("find-me resolves to a notice when geolocation is unavailable or denied", async () => {
  const missing = await findMe(undefined);
  expect(missing.ok).toBe(false);

  const denying = {
    getCurrentPosition: (
      _ok: PositionCallback,
      err?: PositionErrorCallback | null,
    ) => err?.({ code: 1, message: "denied" } as GeolocationPositionError),
  } as unknown as Geolocation;
  const denied = await findMe(denying);
  expect(denied.ok).toBe(false);
  if (!denied.ok) expect(denied.notice).toContain("denied");
});
