"""Elemental-inequality generation and assembly of the reduced LP instance.

The generic constraints are the elemental ones: nonnegativity of
H(X_i | all others) for every variable (n facts) and of I(X_i ; X_j | X_A)
for every unordered pair and every conditioning subset of the remaining
variables (C(n,2) * 2^(n-2) facts).  Every fact is rewritten into reduced
LP columns through the canonical map, merged, and exact duplicates are
dropped.  Rows that are positive multiples of one another are kept: the
dedup is exact-match only, which is cheap and deterministic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import PdValidationError, SolverError
from .model import independence_to_expr, varset_names
from .reduction import ReductionMap

ELEMENTAL = "elemental"
INDEPENDENCE = "independence"
BOUND = "bound"


@dataclass(frozen=True)
class SparseRow:
    """One constraint over dense LP columns; entries are sorted by column."""

    entries: tuple  # ((col, coef), ...)
    sense: str
    rhs: float
    kind: str = ELEMENTAL

    def as_dict(self):
        return dict(self.entries)


@dataclass
class LPInstance:
    num_cols: int
    n_entropy_cols: int
    col_names: list
    rows: list
    objective: np.ndarray
    col_lower_bounds: np.ndarray
    rmap: ReductionMap
    al_cols: dict
    counts: dict = field(default_factory=dict)
    trivially_infeasible: bool = False

    def col_of_mask(self, mask):
        return self.rmap.col_of(mask)

    def with_objective(self, coefs):
        c = np.zeros(self.num_cols)
        for col, v in coefs.items():
            c[col] += v
        return replace(self, objective=c)

    def with_extra_rows(self, rows):
        return replace(self, rows=self.rows + list(rows))

    def with_rows(self, rows):
        return replace(self, rows=list(rows))


def elemental_count(n):
    """n + C(n,2) * 2^(n-2) -- the number of elemental inequalities."""
    if n < 1:
        return 0
    pairs = n * (n - 1) // 2
    return n + pairs * (1 << max(n - 2, 0))


def gen_elemental(n):
    """Yield every elemental fact.

    ('H', i, None, rest): H(X_i | X_rest) >= 0 with rest = all others;
    ('I', i, j, a): I(X_i ; X_j | X_a) >= 0 with a ranging over subsets of
    the complement of {i, j}.
    """
    if not 1 <= n <= 30:
        raise PdValidationError(f"elemental generation needs 1 <= n <= 30, got {n}")
    full = (1 << n) - 1
    for i in range(n):
        yield ("H", i, None, full & ~(1 << i))
    for i in range(n):
        for j in range(i + 1, n):
            free = [b for b in range(n) if b != i and b != j]
            for k in range(1 << (n - 2)):
                a = 0
                for t, pos in enumerate(free):
                    if k >> t & 1:
                        a |= 1 << pos
                yield ("I", i, j, a)


def _merge_terms(pairs):
    """Merge (col, coef) pairs, dropping the no-column sentinel and zeros."""
    ents = {}
    for col, coef in pairs:
        if col < 0:
            continue
        c = ents.get(col, 0.0) + coef
        if c == 0.0:
            ents.pop(col, None)
        else:
            ents[col] = c
    return tuple(sorted(ents.items()))


def reduce_fact(fact, rmap):
    """Rewrite one elemental fact into a reduced row; None when vacuous."""
    kind, i, j, a = fact
    bi = 1 << i
    if kind == "H":
        pairs = [(rmap.col_of(a | bi), 1.0), (rmap.col_of(a), -1.0)]
    else:
        bj = 1 << j
        pairs = [
            (rmap.col_of(a | bi), 1.0),
            (rmap.col_of(a | bj), 1.0),
            (rmap.col_of(a | bi | bj), -1.0),
            (rmap.col_of(a), -1.0),
        ]
    entries = _merge_terms(pairs)
    if not entries:
        return None
    return SparseRow(entries=entries, sense=">=", rhs=0.0, kind=ELEMENTAL)


def reduce_expr(expr, rmap, n_entropy_cols):
    """Entropy terms to reduced columns, AL terms to the columns after the
    entropy block (AL variable i lives at column n_entropy_cols + i)."""
    pairs = [(rmap.col_of(m), c) for m, c in expr.entropy.items()]
    pairs += [(n_entropy_cols + i, c) for i, c in expr.al.items()]
    return _merge_terms(pairs)


def row_from_expr(expr, sense, rhs, rmap, n_entropy_cols, kind):
    """Reduced constraint row from an expression; None when vacuous.

    A vacuous row with an unsatisfiable right-hand side is reported by the
    caller through the instance's infeasibility flag.
    """
    entries = reduce_expr(expr, rmap, n_entropy_cols)
    return SparseRow(entries=entries, sense=sense, rhs=rhs, kind=kind) if entries else None


def _vacuous_violated(sense, rhs):
    if sense == ">=":
        return rhs > 1e-12
    if sense == "<=":
        return rhs < -1e-12
    return abs(rhs) > 1e-12


def _elemental_rows_naive(n, rmap):
    rows = set()
    for fact in gen_elemental(n):
        row = reduce_fact(fact, rmap)
        if row is not None:
            rows.add(row)
    return rows


def _elemental_rows_fast(n, rmap):
    """Vectorized equivalent of the naive sweep (same rows, same dedup)."""
    canon = rmap.canon
    colarr = np.full(1 << n, -1, dtype=np.int64)
    for rep, k in rmap.index_of.items():
        colarr[rep] = k
    rows = set()
    full = (1 << n) - 1
    for i in range(n):
        row = reduce_fact(("H", i, None, full & ~(1 << i)), rmap)
        if row is not None:
            rows.add(row)
    if n < 2:
        return rows
    base = np.arange(1 << (n - 2), dtype=np.int64)
    for i in range(n):
        bi = np.int64(1 << i)
        for j in range(i + 1, n):
            bj = np.int64(1 << j)
            free = [b for b in range(n) if b != i and b != j]
            a = np.zeros(base.size, dtype=np.int64)
            for t, pos in enumerate(free):
                a |= ((base >> t) & 1) << pos
            c1 = colarr[canon[a | bi]]
            c2 = colarr[canon[a | bj]]
            c3 = colarr[canon[a | bi | bj]]
            c4 = colarr[canon[a]]
            plus = np.stack((np.minimum(c1, c2), np.maximum(c1, c2)), axis=1)
            minus = np.stack((np.minimum(c3, c4), np.maximum(c3, c4)), axis=1)
            quad = np.unique(np.concatenate((plus, minus), axis=1), axis=0)
            for p1, p2, m1, m2 in quad.tolist():
                entries = _merge_terms(
                    [(p1, 1.0), (p2, 1.0), (m1, -1.0), (m2, -1.0)]
                )
                if entries:
                    rows.add(SparseRow(entries=entries, sense=">=", rhs=0.0, kind=ELEMENTAL))
    return rows


def entropy_col_name(mask, rv_names):
    return "H(" + ",".join(varset_names(mask, rv_names)) + ")"


def assemble(pd, rmap, fast_threshold=11):
    """Build the solver-ready instance: deduplicated reduced elemental rows,
    independence equalities, and constant-bound rows, in a deterministic
    order (elemental rows sorted by their canonical form, the remainder in
    declaration order)."""
    n = pd.n
    reps = rmap.reps
    n_entropy = len(reps)
    col_names = [entropy_col_name(m, pd.rv_names) for m in reps] + list(pd.al_names)
    num_cols = n_entropy + len(pd.al_names)

    if n == 0:
        elem = set()
    elif n >= fast_threshold:
        elem = _elemental_rows_fast(n, rmap)
    else:
        elem = _elemental_rows_naive(n, rmap)
    rows = sorted(elem, key=lambda r: (r.entries, r.sense, r.rhs))
    n_elem = len(rows)

    trivially_infeasible = False
    n_indep = 0
    for ind in pd.indeps:
        expr = independence_to_expr(ind)
        row = row_from_expr(expr, "=", 0.0, rmap, n_entropy, INDEPENDENCE)
        if row is None:
            warnings.warn("independence relation is vacuous after reduction", stacklevel=2)
            continue
        rows.append(row)
        n_indep += 1

    n_bc = 0
    for cb in pd.bc:
        row = row_from_expr(cb.lhs.expr, cb.sense, cb.rhs, rmap, n_entropy, BOUND)
        if row is None:
            if _vacuous_violated(cb.sense, cb.rhs):
                warnings.warn(
                    f"constant bound {cb.src!r} reduces to an unsatisfiable constant",
                    stacklevel=2,
                )
                trivially_infeasible = True
            else:
                warnings.warn(f"constant bound {cb.src!r} is vacuous after reduction",
                              stacklevel=2)
            continue
        rows.append(row)
        n_bc += 1

    objective = np.zeros(num_cols)
    if pd.objective is not None:
        for col, c in reduce_expr(pd.objective.expr, rmap, n_entropy):
            objective[col] += c

    counts = {
        "elemental_generated": elemental_count(n),
        "elemental": n_elem,
        "independence": n_indep,
        "bounds": n_bc,
        "total": n_elem + n_indep + n_bc,
    }
    return LPInstance(
        num_cols=num_cols,
        n_entropy_cols=n_entropy,
        col_names=col_names,
        rows=rows,
        objective=objective,
        col_lower_bounds=np.zeros(num_cols),
        rmap=rmap,
        al_cols={nm: n_entropy + k for k, nm in enumerate(pd.al_names)},
        counts=counts,
        trivially_infeasible=trivially_infeasible,
    )


def constraint_report_line(instance):
    c = instance.counts
    return (
        f"Total number of constraints given to solver: {c['total']} "
        f"(elemental {c['elemental']} deduplicated from {c['elemental_generated']}, "
        f"independence {c['independence']}, constant bounds {c['bounds']})"
    )


def eval_expr_at(expr, instance, primal):
    """Value of an expression at a solved primal vector over reduced columns."""
    total = expr.const
    for m, c in expr.entropy.items():
        col = instance.col_of_mask(m)
        if col >= 0:
            total += c * primal[col]
    for i, c in expr.al.items():
        name_col = instance.n_entropy_cols + i
        if name_col >= instance.num_cols:
            raise SolverError("expression references an unknown LP variable")
        total += c * primal[name_col]
    return total
