import type { GeoPointJson } from "./types";

export type ActivePopup = "none" | "info_card" | "line_chart";

// Single source of truth for what the map is showing. The hazard layer
// starts off to keep the first paint uncluttered.
export interface MapViewState {
  center: GeoPointJson;
  zoom: number;
  hazardLayerOn: boolean;
  selectedSensor: string | null;
  activePopup: ActivePopup;
  // which sensors are visible and which averaging window drives the glyph
  // number; both are user choices from the overlay panel
  hiddenSensors: Set<string>;
  displayWindow: string;
}

export function initialViewState(center: GeoPointJson, zoom: number): MapViewState {
  return {
    center,
    zoom,
    hazardLayerOn: false,
    selectedSensor: null,
    activePopup: "none",
    hiddenSensors: new Set(),
    displayWindow: "10min",
  };
}
