// Hazard-layer controller: viewport-driven, debounced queries against
// /api/hazards, issued only while the layer is enabled. Kept free of any
// map-library types so the query discipline is testable on its own.

import type { BBox, HazardClusterJson, HazardSiteJson } from "./types";

export const HAZARD_DEBOUNCE_MS = 250;

type FetchClusters = (bbox: BBox, zoom: number) => Promise<HazardClusterJson[]>;

export class HazardLayerController {
  private enabled = false;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private lastViewport: { bbox: BBox; zoom: number } | null = null;
  // true after a failed fetch: the badge shows stale data until the next
  // viewport change succeeds
  stale = false;

  constructor(
    private readonly fetchClusters: FetchClusters,
    private readonly onClusters: (clusters: HazardClusterJson[]) => void,
    private readonly debounceMs: number = HAZARD_DEBOUNCE_MS,
  ) {}

  get isEnabled(): boolean {
    return this.enabled;
  }

  setEnabled(on: boolean): void {
    this.enabled = on;
    if (!on) {
      this.cancelPending();
      return;
    }
    // turning the layer on should populate it without waiting for a pan
    if (this.lastViewport) this.schedule();
  }

  viewportChanged(bbox: BBox, zoom: number): void {
    this.lastViewport = { bbox, zoom };
    if (!this.enabled) return;
    this.schedule();
  }

  private cancelPending(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  private schedule(): void {
    this.cancelPending();
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.refresh();
    }, this.debounceMs);
  }

  private async refresh(): Promise<void> {
    if (!this.enabled || this.lastViewport === null) return;
    const { bbox, zoom } = this.lastViewport;
    try {
      const clusters = await this.fetchClusters(bbox, zoom);
      if (!this.enabled) return; // toggled off while in flight
      this.stale = false;
      this.onClusters(clusters);
    } catch {
      this.stale = true; // keep showing what we have; retry on next move
    }
  }
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function clusterBadgeHtml(count: number): string {
  return `<div class="hazard-cluster"><span class="badge">${count}</span></div>`;
}

// Singleton clusters open a popup with the facility's contact details and
// the EPA profile link.
export function sitePopupHtml(site: HazardSiteJson): string {
  return (
    `<div class="hazard-site">` +
    `<h4>${escapeHtml(site.name)}</h4>` +
    `<p>${escapeHtml(site.address)}</p>` +
    `<p>Contact: ${escapeHtml(site.contact_name)}</p>` +
    `<p><a href="${escapeHtml(site.epa_url)}" target="_blank" rel="noopener">EPA facility record</a></p>` +
    `</div>`
  );
}
