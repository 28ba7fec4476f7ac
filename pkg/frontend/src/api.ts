// Thin fetch client for the airwatch API. Every method returns the parsed
// JSON body verbatim so callers can surface values without reformatting.

import type {
  ApiErrorJson,
  BBox,
  ColorscaleJson,
  HazardClusterJson,
  ReportSubmittedJson,
  SensorSummaryJson,
  TimeseriesJson,
} from "./types";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly fields?: Record<string, string>;

  constructor(body: ApiErrorJson) {
    super(body.message);
    this.status = body.status;
    this.code = body.code;
    this.fields = body.fields;
  }
}

async function asError(response: Response): Promise<ApiError> {
  try {
    return new ApiError((await response.json()) as ApiErrorJson);
  } catch {
    // non-JSON error body (proxy hiccup etc.) — synthesize the same shape
    return new ApiError({
      status: response.status,
      code: "http_error",
      message: `HTTP ${response.status}`,
    });
  }
}

export class AirwatchClient {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!response.ok) throw await asError(response);
    return (await response.json()) as T;
  }

  sensors(): Promise<SensorSummaryJson[]> {
    return this.getJson("/api/sensors");
  }

  sensor(sensorId: string): Promise<SensorSummaryJson> {
    return this.getJson(`/api/sensors/${encodeURIComponent(sensorId)}`);
  }

  timeseries(
    sensorId: string,
    opts: { from?: string; to?: string; maxPoints?: number } = {},
  ): Promise<TimeseriesJson> {
    const params = new URLSearchParams();
    if (opts.from !== undefined) params.set("from", opts.from);
    if (opts.to !== undefined) params.set("to", opts.to);
    if (opts.maxPoints !== undefined) params.set("max_points", String(opts.maxPoints));
    const query = params.toString();
    const suffix = query ? `?${query}` : "";
    return this.getJson(
      `/api/sensors/${encodeURIComponent(sensorId)}/timeseries${suffix}`,
    );
  }

  colorscale(): Promise<ColorscaleJson> {
    return this.getJson("/api/meta/colorscale");
  }

  hazards(bbox: BBox, zoom: number): Promise<HazardClusterJson[]> {
    const box = `${bbox.minLon},${bbox.minLat},${bbox.maxLon},${bbox.maxLat}`;
    return this.getJson(`/api/hazards?bbox=${box}&zoom=${zoom}`);
  }

  async submitReport(draft: {
    lat: number;
    lon: number;
    category: string;
    description: string;
    reporter_contact?: string;
  }): Promise<ReportSubmittedJson> {
    const response = await this.fetchFn(`${this.baseUrl}/api/reports`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(draft),
    });
    if (!response.ok) throw await asError(response);
    return (await response.json()) as ReportSubmittedJson;
  }
}
