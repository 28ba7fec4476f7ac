// Overlay panel behaviors: sensor picker, Find Me, the report form, the
// visibility checklist, and the display-window selector. DOM assembly stays
// in main.ts; these are the data transformations and API round-trips.

import { ApiError, type AirwatchClient } from "./api";
import type { ReportSubmittedJson, SensorSummaryJson } from "./types";

export interface SensorOption {
  id: string;
  name: string;
  lat: number | null;
  lon: number | null;
}

export function sensorOptions(summaries: SensorSummaryJson[]): SensorOption[] {
  return summaries.map((s) => ({
    id: s.sensor_id,
    name: s.name,
    lat: s.location?.lat ?? null,
    lon: s.location?.lon ?? null,
  }));
}

export type LocateResult =
  | { ok: true; lat: number; lon: number }
  | { ok: false; notice: string };

// Find Me: wraps the browser permission flow; denial (or no geolocation at
// all) resolves to a notice instead of throwing, so the map stays put.
export function findMe(geolocation: Geolocation | undefined): Promise<LocateResult> {
  if (!geolocation) {
    return Promise.resolve({
      ok: false,
      notice: "Location is not available in this browser.",
    });
  }
  return new Promise((resolve) => {
    geolocation.getCurrentPosition(
      (pos) =>
        resolve({ ok: true, lat: pos.coords.latitude, lon: pos.coords.longitude }),
      () =>
        resolve({
          ok: false,
          notice: "Location permission was denied; the map was left unchanged.",
        }),
      { enableHighAccuracy: false, timeout: 8000 },
    );
  });
}

export interface ReportDraft {
  lat: number;
  lon: number;
  category: string;
  description: string;
  reporter_contact?: string;
}

export type ReportOutcome =
  | { ok: true; report: ReportSubmittedJson }
  | { ok: false; message: string; fields: Record<string, string> };

// Submits a community report; validation failures come back as per-field
// messages for the form rather than an exception.
export async function submitReport(
  client: AirwatchClient,
  draft: ReportDraft,
): Promise<ReportOutcome> {
  try {
    const report = await client.submitReport(draft);
    return { ok: true, report };
  } catch (err) {
    if (err instanceof ApiError) {
      return { ok: false, message: err.message, fields: err.fields ?? {} };
    }
    return {
      ok: false,
      message: err instanceof Error ? err.message : "report submission failed",
      fields: {},
    };
  }
}
