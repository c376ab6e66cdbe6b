// Problem-description generators for the classic parametrized coding
// problems.  Each generator returns complete PD file text that the solver
// CLI accepts unchanged.

import { allPermutations } from "./perms.js";

export interface PdJson {
  OPT?: string[];
  RV: string[];
  AL?: string[];
  O?: string;
  D?: { dependent: string[]; given: string[] }[];
  I?: { independent: string[]; given: string[] }[];
  BC?: string[];
  BP?: string[];
  QU?: string[];
  SE?: string[];
  S?: string[][];
}

export function renderPd(doc: PdJson, comment?: string): string {
  const head = comment ? `# ${comment}\n` : "";
  return `${head}PD\n${JSON.stringify(doc, null, 2)}\n`;
}

/** Extract the JSON object from PD file text (comments outside the JSON). */
export function parsePdText(text: string): PdJson {
  const lines = text.split("\n");
  let k = 0;
  while (k < lines.length && (lines[k].trim() === "" || lines[k].trim().startsWith("#"))) k++;
  if (k >= lines.length || !lines[k].trim().startsWith("PD")) {
    throw new Error("no PD marker found");
  }
  const inline = lines[k].trim().slice(2).trim();
  const body = inline !== "" ? inline : lines.slice(k + 1).join("\n");
  return JSON.parse(body) as PdJson;
}

const MAX_VARIABLES = 30;

/**
 * Regenerating-code tradeoff instance with the node contents eliminated:
 * node i's content is the collection of its outgoing repair data S_ij.
 * Supported shapes: d = k = n-1 with 3 <= n <= 5 (the node-content view
 * keeps the variable count at n(n-1)).
 */
export function genRegenerating(n: number, k: number, d: number): string {
  if (!(k === n - 1 && d === n - 1) || n < 3 || n > 5) {
    throw new Error(
      `unsupported regenerating-code shape (${n},${k},${d}): ` +
      "need d = k = n-1 and 3 <= n <= 5",
    );
  }
  const nodes = [...Array(n).keys()].map((i) => i + 1);
  const rv: string[] = [];
  for (const i of nodes) for (const j of nodes) if (i !== j) rv.push(`S${i}${j}`);
  const deps = nodes.map((i) => ({
    dependent: nodes.filter((j) => j !== i).map((j) => `S${i}${j}`),
    given: nodes.filter((j) => j !== i).map((j) => `S${j}${i}`),
  }));
  const sRows = allPermutations(n).map((sigma) => {
    const row: string[] = [];
    for (const i of nodes) {
      for (const j of nodes) {
        if (i !== j) row.push(`S${sigma[i - 1] + 1}${sigma[j - 1] + 1}`);
      }
    }
    return row;
  });
  const outgoing1 = nodes.filter((j) => j !== 1).map((j) => `S1${j}`);
  const bc = [
    `H(${outgoing1.join(",")}) - A <= 0`,
    "H(S12) - B <= 0",
    `H(${rv.join(",")}) >= 1`,
  ];
  const doc: PdJson = { RV: rv, AL: ["A", "B"], O: "A+B", D: deps, I: [], BC: bc, S: sRows };
  if (n === 4) {
    doc.OPT = ["PDC", "CS"];
    doc.BP = ["4A + 6B >= 3"];
    doc.SE = ["A", "B", "2I(S12;S21|S32)+H(S21|S31)+A"];
    doc.QU = ["A", "B", "2H(S12|S13)", "-2I(S12;S21|S32)"];
    return renderPd(
      { OPT: doc.OPT, RV: doc.RV, AL: doc.AL, O: doc.O, D: doc.D, I: doc.I,
        BC: doc.BC, BP: doc.BP, SE: doc.SE, QU: doc.QU, S: doc.S },
      `regenerating code (${n},${k},${d}): storage vs repair tradeoff`,
    );
  }
  if (n === 5) {
    doc.O = "3.2A + 2B";
    doc.BP = ["15A+10B >= 6"];
    doc.QU = ["A", "B", "H(S13|S14,S24)", "I(S13;S24|S25)+2I(S32;S32)"];
  }
  return renderPd(doc, `regenerating code (${n},${k},${d}): storage vs repair tradeoff`);
}

/**
 * Private-information-retrieval instance generator.  Interface reserved:
 * N messages replicated across K servers, one query/answer pair per server
 * per retrieval pattern.  Not implemented yet.
 */
export function genPir(_N: number, _K: number): string {
  throw new Error("PIR generation is not implemented yet");
}

/**
 * Threshold secret-sharing instance generator.  Interface reserved: one
 * secret, n shares, any t reconstruct and any t-1 learn nothing.  Not
 * implemented yet.
 */
export function genSecretSharing(_n: number, _t: number): string {
  throw new Error("secret-sharing generation is not implemented yet");
}

/**
 * Coded-caching tradeoff instance: N unit-size independent files W*, K user
 * caches Z*, one multicast X_d per request vector d in [N]^K.  Cache size M
 * and transmission size R enter as extra LP variables bounded below by the
 * relevant entropies.
 */
export function genCaching(N: number, K: number): string {
  if (N < 1 || K < 1 || N > 9 || K > 9) {
    throw new Error(`unsupported caching shape (${N},${K})`);
  }
  const count = N + K + Math.pow(N, K);
  if (count > MAX_VARIABLES) {
    throw new Error(
      `caching shape (${N},${K}) needs ${count} variables; at most ${MAX_VARIABLES} supported`,
    );
  }
  const files = [...Array(N).keys()].map((i) => i + 1);
  const users = [...Array(K).keys()].map((i) => i + 1);
  const vectors: number[][] = [];
  const grow = (acc: number[]) => {
    if (acc.length === K) {
      vectors.push([...acc]);
      return;
    }
    for (const f of files) {
      acc.push(f);
      grow(acc);
      acc.pop();
    }
  };
  grow([]);
  const xname = (d: number[]) => `X${d.join("")}`;
  const rv = [
    ...files.map((i) => `W${i}`),
    ...users.map((u) => `Z${u}`),
    ...vectors.map(xname),
  ];
  const deps: { dependent: string[]; given: string[] }[] = [
    { // the server output is a deterministic function of the files
      dependent: [...users.map((u) => `Z${u}`), ...vectors.map(xname)],
      given: files.map((i) => `W${i}`),
    },
  ];
  for (const dvec of vectors) {
    for (const u of users) {
      deps.push({ // user u decodes its requested file from cache + multicast
        dependent: [`W${dvec[u - 1]}`],
        given: [`Z${u}`, xname(dvec)],
      });
    }
  }
  // file permutation pi and user permutation tau act jointly; the multicast
  // for request vector d maps to the one for d'(u) = pi(d(tau^(-1)(u)))
  const sRows: string[][] = [];
  for (const pi of allPermutations(N)) {
    for (const tau of allPermutations(K)) {
      const tauInv: number[] = Array(K);
      tau.forEach((v, j) => { tauInv[v] = j; });
      const row = [
        ...files.map((i) => `W${pi[i - 1] + 1}`),
        ...users.map((u) => `Z${tau[u - 1] + 1}`),
        ...vectors.map((dvec) => {
          const img = users.map((u) => pi[dvec[tauInv[u - 1]] - 1] + 1);
          return xname(img);
        }),
      ];
      sRows.push(row);
    }
  }
  const bc = [
    "H(W1) = 1",
    "H(Z1) - M <= 0",
    ...vectors.map((dvec) => `H(${xname(dvec)}) - R <= 0`),
  ];
  const indep = N >= 2
    ? [{ independent: files.map((i) => `W${i}`), given: [] as string[] }]
    : [];
  const doc: PdJson = {
    RV: rv,
    AL: ["M", "R"],
    O: "M + R",
    D: deps,
    I: indep,
    BC: bc,
    S: sRows,
  };
  return renderPd(doc, `coded caching (${N},${K}): cache size vs transmission tradeoff`);
}
