// The UI must not hardcode any color, breakpoint, or guidance text of its
// own: everything renders from API payloads. Verified by grepping the source
// and the built bundle for the values the colorscale endpoint serves.

import { readFileSync, readdirSync } from "node:fs";
import path from "node:path";
import { beforeAll, expect, inject, test } from "vitest";

import { AirwatchClient } from "../src/api";
import type { ColorscaleJson } from "../src/types";

const FRONTEND_ROOT = path.resolve(__dirname, "..");

function sourceCorpus(): Array<{ file: string; text: string }> {
  const corpus: Array<{ file: string; text: string }> = [];
  const srcDir = path.join(FRONTEND_ROOT, "src");
  for (const name of readdirSync(srcDir)) {
    corpus.push({
      file: `src/${name}`,
      text: readFileSync(path.join(srcDir, name), "utf-8"),
    });
  }
  corpus.push({
    file: "index.html",
    text: readFileSync(path.join(FRONTEND_ROOT, "index.html"), "utf-8"),
  });
  const assets = path.join(FRONTEND_ROOT, "dist", "assets");
  for (const name of readdirSync(assets)) {
    if (name.endsWith(".js")) {
      corpus.push({
        file: `dist/assets/${name}`,
        text: readFileSync(path.join(assets, name), "utf-8"),
      });
    }
  }
  return corpus;
}

let scale: ColorscaleJson;

beforeAll(async () => {
  scale = await new AirwatchClient(inject("baseUrl")).colorscale();
});

test("no scale color is hardcoded in the source or the built bundle", () => {
  const hexes = new Set<string>();
  for (const category of scale.categories) hexes.add(category.color.toLowerCase());
  for (const anchor of scale.color_anchors) hexes.add(anchor.color.toLowerCase());
  expect(hexes.size).toBeGreaterThanOrEqual(6);

  const corpus = sourceCorpus();
  expect(corpus.length).toBeGreaterThan(5); // src + index.html + bundle
  for (const { file, text } of corpus) {
    const lower = text.toLowerCase();
    for (const hex of hexes) {
      expect(lower.includes(hex), `${file} must not hardcode ${hex}`).toBe(false);
    }
  }
});

test("no guidance sentence or breakpoint table is baked into the bundle", () => {
  const corpus = sourceCorpus();
  for (const category of scale.categories) {
    // a distinctive slice of each guidance string, long enough to be unique
    const probe = category.guidance.slice(0, 40);
    for (const { file, text } of corpus) {
      expect(text.includes(probe), `${file} must not embed guidance text`).toBe(false);
    }
  }
  // the signature concentration edges of the EPA table, as bare literals
  for (const edge of ["35.4", "55.4", "150.4", "250.4", "350.4", "500.4"]) {
    for (const { file, text } of corpus.filter((c) => c.file.startsWith("src/"))) {
      expect(text.includes(edge), `${file} must not embed breakpoint ${edge}`).toBe(
        false,
      );
    }
  }
});
