// End-to-end pipeline: generate or accept PD text, compute the tradeoff
// hull through the solver CLI, and emit the plot image plus data sidecar.

import { parsePdText } from "./pdgen.js";
import { writeTradeoffPlot } from "./plot.js";
import { runHull } from "./runner.js";

/** The two axis labels, read from the objective of the PD text. */
export function axisLabels(pdText: string): [string, string] {
  const doc = parsePdText(pdText);
  const objective = doc.O ?? "";
  const terms = objective.split("+").map((t) => t.trim()).filter(Boolean);
  if (terms.length === 2) {
    // drop a leading numeric coefficient from each term
    const strip = (t: string) => t.replace(/^[\d.]+/, "");
    return [strip(terms[0]), strip(terms[1])];
  }
  return ["x", "y"];
}

export interface PipelineResult {
  points: [number, number][];
  imagePath: string;
}

/** Run hull mode on PD text and write the tradeoff plot. */
export function runAndPlot(pdText: string, imagePath: string): PipelineResult {
  const { points } = runHull(pdText);
  writeTradeoffPlot(points, axisLabels(pdText), imagePath);
  return { points, imagePath };
}
