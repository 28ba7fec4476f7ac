// Historical line chart with AQI category bands painted behind the series.
// The geometry is computed as a plain model first (testable without a DOM),
// then serialized to SVG. Interactive bits — box zoom, hover tooltip, image
// export — hang off the SVG in ChartView.

import type { TimeseriesJson } from "./types";

export interface BandRect {
  category: string;
  label: string;
  color: string; // verbatim from the API band metadata
  concLow: number;
  concHigh: number;
  y0: number; // pixel top
  y1: number; // pixel bottom
}

export interface ChartPoint {
  x: number;
  y: number;
  timestamp: string;
  value: number;
}

export interface ChartModel {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
  xDomain: [number, number]; // epoch millis
  yDomain: [number, number]; // µg/m³
  bands: BandRect[];
  points: ChartPoint[];
  pathD: string;
  empty: boolean;
}

export interface ChartOptions {
  width?: number;
  height?: number;
  // restrict to a sub-range (box zoom); epoch millis
  xZoom?: [number, number];
}

const MARGIN = { top: 12, right: 16, bottom: 28, left: 44 };

export function chartModel(series: TimeseriesJson, opts: ChartOptions = {}): ChartModel {
  const width = opts.width ?? 640;
  const height = opts.height ?? 320;
  const innerW = width - MARGIN.left - MARGIN.right;
  const innerH = height - MARGIN.top - MARGIN.bottom;

  let rows = series.points.map((p) => ({
    millis: Date.parse(p.timestamp),
    timestamp: p.timestamp,
    value: p.pm2_5,
  }));
  if (opts.xZoom) {
    const [lo, hi] = opts.xZoom;
    rows = rows.filter((r) => r.millis >= lo && r.millis <= hi);
  }

  const empty = rows.length === 0;
  const xDomain: [number, number] = empty
    ? [Date.parse(series.from), Date.parse(series.to)]
    : [rows[0].millis, rows[rows.length - 1].millis];
  if (xDomain[0] === xDomain[1]) xDomain[1] = xDomain[0] + 1;

  const maxValue = empty ? 0 : Math.max(...rows.map((r) => r.value));
  // headroom above the series, and never so flat the first band vanishes
  const yTop = Math.max(maxValue * 1.15, 15);
  const yDomain: [number, number] = [0, yTop];

  const xScale = (millis: number) =>
    MARGIN.left + ((millis - xDomain[0]) / (xDomain[1] - xDomain[0])) * innerW;
  const yScale = (value: number) =>
    MARGIN.top + innerH - (value / yDomain[1]) * innerH;

  const bands: BandRect[] = [];
  for (const band of series.bands) {
    if (band.conc_low >= yDomain[1]) continue; // entirely above view
    const top = Math.min(band.conc_high, yDomain[1]);
    bands.push({
      category: band.category,
      label: band.label,
      color: band.color,
      concLow: band.conc_low,
      concHigh: band.conc_high,
      y0: yScale(top),
      y1: yScale(band.conc_low),
    });
  }

  const points: ChartPoint[] = rows.map((r) => ({
    x: xScale(r.millis),
    y: yScale(r.value),
    timestamp: r.timestamp,
    value: r.value,
  }));
  const pathD = points
    .map((p, i) => `${i === 0 ? "M" : "L"}${p.x.toFixed(1)},${p.y.toFixed(1)}`)
    .join("");

  return {
    width,
    height,
    margin: MARGIN,
    xDomain,
    yDomain,
    bands,
    points,
    pathD,
    empty,
  };
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function chartSvg(model: ChartModel): string {
  const parts: string[] = [];
  const innerW = model.width - model.margin.left - model.margin.right;
  for (const band of model.bands) {
    parts.push(
      `<rect x="${model.margin.left}" y="${band.y0.toFixed(1)}" width="${innerW}" ` +
        `height="${(band.y1 - band.y0).toFixed(1)}" fill="${escapeXml(band.color)}" ` +
        `fill-opacity="0.25" data-band="${escapeXml(band.category)}"/>`,
    );
  }
  if (model.empty) {
    parts.push(
      `<text x="${model.width / 2}" y="${model.height / 2}" text-anchor="middle" ` +
        `font-family="system-ui, sans-serif" font-size="14" fill="#666">no readings in range</text>`,
    );
  } else {
    parts.push(
      `<path d="${model.pathD}" fill="none" stroke="#1a1a1a" stroke-width="1.5"/>`,
    );
  }
  // y axis ticks at band boundaries double as a concentration scale
  const seen = new Set<number>();
  for (const band of model.bands) {
    if (seen.has(band.concLow)) continue;
    seen.add(band.concLow);
    parts.push(
      `<text x="${model.margin.left - 6}" y="${band.y1.toFixed(1)}" text-anchor="end" ` +
        `dominant-baseline="middle" font-family="system-ui, sans-serif" font-size="10" ` +
        `fill="#555">${band.concLow}</text>`,
    );
  }
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${model.width}" height="${model.height}" ` +
    `viewBox="0 0 ${model.width} ${model.height}">` +
    `<rect width="${model.width}" height="${model.height}" fill="white"/>` +
    parts.join("") +
    `</svg>`
  );
}

export function nearestPoint(model: ChartModel, px: number): ChartPoint | null {
  let best: ChartPoint | null = null;
  let bestDist = Infinity;
  for (const p of model.points) {
    const d = Math.abs(p.x - px);
    if (d < bestDist) {
      bestDist = d;
      best = p;
    }
  }
  return best;
}

// DOM wrapper: renders into a container and wires zoom/tooltip/export.
export class ChartView {
  private model: ChartModel;
  private zoomStack: Array<[number, number]> = [];

  constructor(
    private readonly container: HTMLElement,
    private series: TimeseriesJson,
    private readonly title: string,
  ) {
    this.model = chartModel(series);
    this.render();
  }

  setSeries(series: TimeseriesJson): void {
    this.series = series;
    this.zoomStack = [];
    this.model = chartModel(series);
    this.render();
  }

  zoomTo(x0px: number, x1px: number): void {
    const [lo, hi] = [Math.min(x0px, x1px), Math.max(x0px, x1px)];
    const toMillis = (px: number) =>
      this.model.xDomain[0] +
      ((px - this.model.margin.left) /
        (this.model.width - this.model.margin.left - this.model.margin.right)) *
        (this.model.xDomain[1] - this.model.xDomain[0]);
    const range: [number, number] = [toMillis(lo), toMillis(hi)];
    if (range[1] - range[0] < 1000) return; // ignore accidental clicks
    this.zoomStack.push(range);
    this.model = chartModel(this.series, { xZoom: range });
    this.render();
  }

  resetZoom(): void {
    this.zoomStack = [];
    this.model = chartModel(this.series);
    this.render();
  }

  svgText(): string {
    return chartSvg(this.model);
  }

  // Rasterize the current SVG and hand the browser a PNG download.
  async saveImage(filename = "chart.png"): Promise<void> {
    const svgBlob = new Blob([this.svgText()], { type: "image/svg+xml" });
    const url = URL.createObjectURL(svgBlob);
    try {
      const image = new Image();
      await new Promise<void>((resolve, reject) => {
        image.onload = () => resolve();
        image.onerror = () => reject(new Error("could not rasterize chart"));
        image.src = url;
      });
      const canvas = document.createElement("canvas");
      canvas.width = this.model.width * 2; // 2x for crisp export
      canvas.height = this.model.height * 2;
      const ctx = canvas.getContext("2d");
      if (!ctx) throw new Error("canvas 2d context unavailable");
      ctx.drawImage(image, 0, 0, canvas.width, canvas.height);
      const anchor = document.createElement("a");
      anchor.href = canvas.toDataURL("image/png");
      anchor.download = filename;
      anchor.click();
    } finally {
      URL.revokeObjectURL(url);
    }
  }

  private render(): void {
    this.container.innerHTML =
      `<div class="chart-head"><strong>${this.title}</strong>` +
      `<span class="chart-actions">` +
      (this.zoomStack.length ? `<button class="chart-reset">Reset zoom</button>` : "") +
      `<button class="chart-save">Save image</button></span></div>` +
      `<div class="chart-body">${this.svgText()}</div>` +
      `<div class="chart-tooltip" hidden></div>`;

    const body = this.container.querySelector<HTMLElement>(".chart-body")!;
    const tooltip = this.container.querySelector<HTMLElement>(".chart-tooltip")!;
    const svg = body.querySelector("svg")!;

    let dragStart: number | null = null;
    svg.addEventListener("mousedown", (e) => {
      dragStart = e.offsetX;
    });
    svg.addEventListener("mouseup", (e) => {
      if (dragStart !== null && Math.abs(e.offsetX - dragStart) > 8) {
        this.zoomTo(dragStart, e.offsetX);
      }
      dragStart = null;
    });
    svg.addEventListener("mousemove", (e) => {
      const hit = nearestPoint(this.model, e.offsetX);
      if (!hit) {
        tooltip.hidden = true;
        return;
      }
      tooltip.hidden = false;
      tooltip.style.left = `${hit.x + 8}px`;
      tooltip.style.top = `${hit.y - 8}px`;
      tooltip.textContent = `${hit.timestamp}: ${hit.value} µg/m³`;
    });
    svg.addEventListener("mouseleave", () => {
      tooltip.hidden = true;
    });

    this.container
      .querySelector(".chart-save")
      ?.addEventListener("click", () => void this.saveImage(`${this.title}.png`));
    this.container
      .querySelector(".chart-reset")
      ?.addEventListener("click", () => this.resetZoom());
  }
}
