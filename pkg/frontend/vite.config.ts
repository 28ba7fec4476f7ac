/// <reference types="vitest/config" />
import { defineConfig } from "vite";

export default defineConfig({
  build: {
    outDir: "dist",
    sourcemap: false,
  },
  test: {
    environment: "node",
    globalSetup: ["tests/globalSetup.ts"],
    include: ["tests/**/*.test.ts"],
    // one shared replay server; keep files serial so fake-timer tests
    // and live HTTP tests don't interleave
    fileParallelism: false,
    testTimeout: 30_000,
    hookTimeout: 60_000,
  },
});
