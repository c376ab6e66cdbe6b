// End-to-end: generated descriptions through the real solver CLI.

import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { spawnSync } from "node:child_process";

import { describe, expect, it } from "vitest";

import { genRegenerating } from "../src/pdgen.js";
import { axisLabels, runAndPlot } from "../src/pipeline.js";
import { parseHullOutput } from "../src/runner.js";
import { solverBinary } from "../src/runner.js";

const HULL_CORNERS: [number, number][] = [
  [1 / 3, 1 / 3],
  [0.375, 0.25],
  [0.5, 1 / 6],
];

function solverAvailable(): boolean {
  const probe = spawnSync(solverBinary(), [], { encoding: "utf8" });
  return probe.error === undefined;
}

describe("hull output parsing", () => {
  it("prefers the final list block", () => {
    const transcript = [
      "Total number of elements before reduction: 16",
      "New point (0.100000, 0.900000).",
      "New point (0.900000, 0.100000).",
      "",
      "",
      "List of found points on the hull:",
      "(0.100000, 0.900000).",
      "(0.500000, 0.500000).",
      "(0.900000, 0.100000).",
      "End of list of found points.",
    ].join("\n");
    expect(parseHullOutput(transcript)).toEqual([
      [0.1, 0.9],
      [0.5, 0.5],
      [0.9, 0.1],
    ]);
  });

  it("falls back to discovery lines", () => {
    const transcript = "New point (0.200000, 0.800000).\nNew point (0.100000, 0.900000).\n";
    expect(parseHullOutput(transcript)).toEqual([
      [0.1, 0.9],
      [0.2, 0.8],
    ]);
  });
});

describe("axis labels", () => {
  it("reads the two objective quantities", () => {
    expect(axisLabels(genRegenerating(4, 3, 3))).toEqual(["A", "B"]);
  });

  it("strips numeric coefficients", () => {
    expect(axisLabels(genRegenerating(5, 4, 4))).toEqual(["A", "B"]);
  });
});

describe("end-to-end pipeline", () => {
  it.skipIf(!solverAvailable())(
    "plots the regenerating-code tradeoff with the reference corners",
    () => {
      const dir = fs.mkdtempSync(path.join(os.tmpdir(), "entrolp-e2e-"));
      try {
        const imagePath = path.join(dir, "tradeoff.png");
        const result = runAndPlot(genRegenerating(4, 3, 3), imagePath);
        for (const corner of HULL_CORNERS) {
          const hit = result.points.some(
            (p) => Math.abs(p[0] - corner[0]) < 1e-5 && Math.abs(p[1] - corner[1]) < 1e-5,
          );
          expect(hit, `missing corner (${corner})`).toBe(true);
        }
        const png = fs.readFileSync(imagePath);
        expect([...png.subarray(0, 8)]).toEqual([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
        const sidecar = JSON.parse(fs.readFileSync(imagePath + ".json", "utf8"));
        expect(sidecar.labels).toEqual(["A", "B"]);
        expect(sidecar.points).toEqual(result.points);
      } finally {
        fs.rmSync(dir, { recursive: true, force: true });
      }
    },
    120000,
  );
});
