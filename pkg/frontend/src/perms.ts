// Permutation utilities shared by the generators and their tests.

export type Perm = number[]; // image indices: perm[j] is where j goes

export function allPermutations(n: number): Perm[] {
  if (n === 0) return [[]];
  const out: Perm[] = [];
  const rec = (rest: number[], acc: number[]) => {
    if (rest.length === 0) {
      out.push([...acc]);
      return;
    }
    for (let i = 0; i < rest.length; i++) {
      const next = rest.slice();
      const [v] = next.splice(i, 1);
      acc.push(v);
      rec(next, acc);
      acc.pop();
    }
  };
  rec([...Array(n).keys()], []);
  return out;
}

export function compose(g: Perm, h: Perm): Perm {
  // (g o h)(j) = g(h(j))
  return h.map((v) => g[v]);
}

/** True when the rows contain the identity and are closed under composition. */
export function isPermutationGroup(rows: Perm[]): boolean {
  if (rows.length === 0) return true;
  const n = rows[0].length;
  const key = (p: Perm) => p.join(",");
  const have = new Set(rows.map(key));
  if (!have.has([...Array(n).keys()].join(","))) return false;
  for (const g of rows) {
    for (const h of rows) {
      if (!have.has(key(compose(g, h)))) return false;
    }
  }
  return true;
}

/** Symmetry rows of named variables -> index permutations. */
export function rowsToPerms(rows: string[][], names: string[]): Perm[] {
  const index = new Map(names.map((nm, k) => [nm, k]));
  return rows.map((row) => row.map((nm) => {
    const k = index.get(nm);
    if (k === undefined) throw new Error(`unknown variable ${nm} in symmetry row`);
    return k;
  }));
}
