// JSON payload shapes, mirrored from the airwatch HTTP API. The UI owns no
// air-quality constants of its own: colors, breakpoints, and guidance all
// arrive through these types.

export interface GeoPointJson {
  lat: number;
  lon: number;
}

export interface WindowSummaryJson {
  window: string;
  duration_secs: number;
  mean_concentration: number | null;
  aqi: number | null;
  color: string | null;
  sample_count: number;
}

export interface CurrentReadingJson {
  timestamp: string;
  pm2_5: number;
  aqi: number;
  category: string;
  guidance: string;
  color: string;
}

export interface SensorSummaryJson {
  sensor_id: string;
  name: string;
  location: GeoPointJson | null;
  online: boolean;
  current: CurrentReadingJson | null;
  windows: WindowSummaryJson[];
}

export interface TimeseriesPointJson {
  timestamp: string;
  pm2_5: number;
}

export interface ConcentrationBandJson {
  category: string;
  label: string;
  conc_low: number;
  conc_high: number;
  index_low: number;
  index_high: number;
  color: string;
}

export interface TimeseriesJson {
  sensor_id: string;
  from: string;
  to: string;
  points: TimeseriesPointJson[];
  bands: ConcentrationBandJson[];
}

export interface ColorscaleJson {
  breakpoints: {
    conc_low: number;
    conc_high: number;
    index_low: number;
    index_high: number;
    category: string;
  }[];
  categories: {
    name: string;
    label: string;
    index_low: number;
    index_high: number;
    guidance: string;
    color: string;
  }[];
  color_anchors: { aqi: number; color: string }[];
}

export interface HazardSiteJson {
  site_id: string;
  name: string;
  contact_name: string;
  address: string;
  location: GeoPointJson;
  epa_url: string;
}

export interface HazardClusterJson {
  centroid: GeoPointJson;
  count: number;
  member_ids: string[];
  site?: HazardSiteJson;
}

export interface ReportSubmittedJson {
  id: string;
  location: GeoPointJson;
  category: string;
  description: string;
  reporter_contact: string | null;
  created_at: string;
  status: string;
}

export interface ApiErrorJson {
  status: number;
  code: string;
  message: string;
  fields?: Record<string, string>;
}

export interface BBox {
  minLon: number;
  minLat: number;
  maxLon: number;
  maxLat: number;
}
