// Tradeoff-curve rendering: points from hull mode onto a PNG, axes labeled
// with the two objective quantities, plus a JSON sidecar with the raw data.

import * as fs from "node:fs";

import { Canvas, Rgb } from "./png.js";

const AXIS: Rgb = [40, 40, 40];
const CURVE: Rgb = [200, 60, 40];
const MARK: Rgb = [30, 60, 180];
const GRID: Rgb = [215, 215, 215];

export interface PlotOptions {
  width?: number;
  height?: number;
  xLabel?: string;
  yLabel?: string;
}

export function renderTradeoffPlot(
  points: [number, number][],
  opts: PlotOptions = {},
): Buffer {
  if (points.length === 0) throw new Error("nothing to plot");
  const width = opts.width ?? 480;
  const height = opts.height ?? 360;
  const margin = { left: 56, right: 16, top: 16, bottom: 44 };
  const canvas = new Canvas(width, height);

  const xs = points.map((p) => p[0]);
  const ys = points.map((p) => p[1]);
  const pad = (lo: number, hi: number): [number, number] => {
    const span = hi - lo;
    const eps = span > 0 ? 0.12 * span : Math.max(0.5, Math.abs(hi) * 0.5, 0.1);
    return [lo - eps, hi + eps];
  };
  const [x0, x1] = pad(Math.min(...xs), Math.max(...xs));
  const [y0, y1] = pad(Math.min(...ys), Math.max(...ys));
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;
  const toX = (v: number) => margin.left + ((v - x0) / (x1 - x0)) * plotW;
  const toY = (v: number) => margin.top + plotH - ((v - y0) / (y1 - y0)) * plotH;

  // light grid with tick labels at quarter positions
  for (let t = 0; t <= 4; t++) {
    const vx = x0 + ((x1 - x0) * t) / 4;
    const vy = y0 + ((y1 - y0) * t) / 4;
    canvas.line(toX(vx), margin.top, toX(vx), margin.top + plotH, GRID);
    canvas.line(margin.left, toY(vy), margin.left + plotW, toY(vy), GRID);
    canvas.text(toX(vx) - 12, margin.top + plotH + 6, vx.toFixed(2), AXIS);
    canvas.text(4, toY(vy) - 3, vy.toFixed(2), AXIS);
  }
  // axes
  canvas.line(margin.left, margin.top, margin.left, margin.top + plotH, AXIS);
  canvas.line(margin.left, margin.top + plotH, margin.left + plotW,
              margin.top + plotH, AXIS);

  const sorted = [...points].sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  for (let k = 0; k + 1 < sorted.length; k++) {
    canvas.line(toX(sorted[k][0]), toY(sorted[k][1]),
                toX(sorted[k + 1][0]), toY(sorted[k + 1][1]), CURVE);
  }
  for (const [px, py] of sorted) canvas.marker(toX(px), toY(py), MARK);

  if (opts.xLabel) {
    canvas.text(margin.left + plotW / 2 - 3 * opts.xLabel.length,
                height - 12, opts.xLabel, AXIS);
  }
  if (opts.yLabel) {
    canvas.text(4, 4, opts.yLabel, AXIS);
  }
  return canvas.toPng();
}

export interface PlotSidecar {
  labels: [string, string];
  points: [number, number][];
}

export function writeTradeoffPlot(
  points: [number, number][],
  labels: [string, string],
  imagePath: string,
): void {
  const png = renderTradeoffPlot(points, { xLabel: labels[0], yLabel: labels[1] });
  fs.writeFileSync(imagePath, png);
  const sidecar: PlotSidecar = { labels, points };
  fs.writeFileSync(imagePath + ".json", JSON.stringify(sidecar, null, 1) + "\n");
}
