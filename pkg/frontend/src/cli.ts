// Pipeline command line:
//   node dist/cli.js regen <n> <k> <d> [out.pd]
//   node dist/cli.js caching <N> <K> [out.pd]
//   node dist/cli.js plot <file.pd> <out.png>
//   node dist/cli.js tradeoff regen <n> <k> <d> <out.png>
//   node dist/cli.js tradeoff caching <N> <K> <out.png>

import * as fs from "node:fs";

import { genCaching, genRegenerating } from "./pdgen.js";
import { runAndPlot } from "./pipeline.js";

const USAGE = `usage:
  pipeline regen <n> <k> <d> [out.pd]        generate a regenerating-code PD
  pipeline caching <N> <K> [out.pd]          generate a coded-caching PD
  pipeline plot <file.pd> <out.png>          hull-solve a PD file and plot it
  pipeline tradeoff regen <n> <k> <d> <out.png>
  pipeline tradeoff caching <N> <K> <out.png>`;

function emit(text: string, outPath?: string): void {
  if (outPath) fs.writeFileSync(outPath, text);
  else process.stdout.write(text);
}

export function main(argv: string[]): number {
  const [cmd, ...rest] = argv;
  try {
    if (cmd === "regen" && rest.length >= 3) {
      const [n, k, d] = rest.slice(0, 3).map(Number);
      emit(genRegenerating(n, k, d), rest[3]);
      return 0;
    }
    if (cmd === "caching" && rest.length >= 2) {
      const [N, K] = rest.slice(0, 2).map(Number);
      emit(genCaching(N, K), rest[2]);
      return 0;
    }
    if (cmd === "plot" && rest.length === 2) {
      const result = runAndPlot(fs.readFileSync(rest[0], "utf8"), rest[1]);
      console.log(`wrote ${result.imagePath} with ${result.points.length} points`);
      return 0;
    }
    if (cmd === "tradeoff" && rest[0] === "regen" && rest.length === 5) {
      const [n, k, d] = rest.slice(1, 4).map(Number);
      const result = runAndPlot(genRegenerating(n, k, d), rest[4]);
      console.log(`wrote ${result.imagePath} with ${result.points.length} points`);
      return 0;
    }
    if (cmd === "tradeoff" && rest[0] === "caching" && rest.length === 4) {
      const [N, K] = rest.slice(1, 3).map(Number);
      const result = runAndPlot(genCaching(N, K), rest[3]);
      console.log(`wrote ${result.imagePath} with ${result.points.length} points`);
      return 0;
    }
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
  console.error(USAGE);
  return 2;
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
