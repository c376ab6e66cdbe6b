// Drives the solver CLI as a subprocess and parses hull-mode output.

import { spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

export interface HullRun {
  points: [number, number][];
  stdout: string;
}

export function solverBinary(): string {
  return process.env.ENTROLP_BIN ?? "entrolp";
}

const POINT_LINE = /^\(([-\d.eE+]+), ([-\d.eE+]+)\)\.$/;
const NEW_POINT = /^New point \(([-\d.eE+]+), ([-\d.eE+]+)\)\.$/;

/** Parse hull-mode stdout into the final sorted point list. */
export function parseHullOutput(stdout: string): [number, number][] {
  const lines = stdout.split("\n").map((ln) => ln.trim());
  const start = lines.indexOf("List of found points on the hull:");
  const end = lines.indexOf("End of list of found points.");
  const points: [number, number][] = [];
  if (start >= 0 && end > start) {
    for (const ln of lines.slice(start + 1, end)) {
      const m = POINT_LINE.exec(ln);
      if (m) points.push([parseFloat(m[1]), parseFloat(m[2])]);
    }
    return points;
  }
  for (const ln of lines) {
    const m = NEW_POINT.exec(ln);
    if (m) points.push([parseFloat(m[1]), parseFloat(m[2])]);
  }
  points.sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  return points;
}

/** Run the CLI in hull mode over PD text and return the tradeoff points. */
export function runHull(pdText: string): HullRun {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "entrolp-pipeline-"));
  try {
    const pdPath = path.join(dir, "problem.pd");
    fs.writeFileSync(pdPath, pdText);
    const proc = spawnSync(solverBinary(), [pdPath, "hull"], {
      encoding: "utf8",
      maxBuffer: 64 * 1024 * 1024,
    });
    if (proc.error) {
      throw new Error(`failed to launch ${solverBinary()}: ${proc.error.message}`);
    }
    if (proc.status !== 0) {
      throw new Error(
        `${solverBinary()} exited with ${proc.status}: ${proc.stderr.trim()}`,
      );
    }
    const points = parseHullOutput(proc.stdout);
    if (points.length === 0) {
      throw new Error("no hull points found in solver output");
    }
    return { points, stdout: proc.stdout };
  } finally {
    fs.rmSync(dir, { recursive: true, force: true });
  }
}
