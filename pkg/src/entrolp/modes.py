"""The computation modes: bounding-plane optimization with queries, the
two-quantity tradeoff hull, duality proofs, sensitivity ranges, and the
random-subset variant.

Output blocks follow the house format: a separator line of 66 asterisks
around each result, optimal values with 6 decimals, queried and sensitivity
values with 5, proof weights with 6.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .lp_build import eval_expr_at, reduce_expr
from .solver import (
    INFEASIBLE,
    OPTIMAL,
    LPSolution,
    solve_integer_weights,
    solve_lp,
)

SEPARATOR = "*" * 66

HULL_DEPTH_LIMIT = 64


def _require_objective(pd):
    if pd.objective is None or pd.objective.expr.is_empty():
        raise SolverError("this computation mode needs a nonempty objective (key 'O')")


def _require_optimal(sol, what):
    if sol.status != OPTIMAL:
        raise SolverError(f"{what} is {sol.status}")


# ---------------------------------------------------------------------------
# regular mode


@dataclass
class RegularResult:
    objective_pretty: str
    optimal_value: float
    queries: list  # (pretty, value)
    solution: LPSolution

    def render(self):
        lines = [SEPARATOR, f"Optimal value for {self.objective_pretty} = "
                 f"{self.optimal_value:.6f}."]
        if self.queries:
            lines.append("Queried values:")
            for pretty, v in self.queries:
                lines.append(f"{pretty:<26}= {v:.5f}")
        lines.append(SEPARATOR)
        return lines


def run_regular(pd, instance, display=False):
    """Minimize the objective and report each query at the returned vertex."""
    _require_objective(pd)
    sol = solve_lp(instance, display=display)
    _require_optimal(sol, "the objective LP")
    queries = [(q.pretty, eval_expr_at(q.expr, instance, sol.primal)) for q in pd.qu]
    return RegularResult(
        objective_pretty=pd.objective.pretty,
        optimal_value=sol.objective_value,
        queries=queries,
        solution=sol,
    )


# ---------------------------------------------------------------------------
# hull mode


@dataclass
class HullPoint:
    x: float
    y: float

    def as_tuple(self):
        return (self.x, self.y)


@dataclass
class HullResult:
    points: list  # sorted by x
    discovered: list  # discovery order
    labels: tuple

    def render(self):
        lines = [f"New point ({p.x:.6f}, {p.y:.6f})." for p in self.discovered]
        lines += ["", "", "List of found points on the hull:"]
        lines += [f"({p.x:.6f}, {p.y:.6f})." for p in self.points]
        lines.append("End of list of found points.")
        return lines


def _axis_columns(pd, instance):
    """The two atomic quantities of the hull objective as LP columns.

    Each objective term must be a single unconditional joint entropy or one
    additional LP variable; anything else cannot define a tradeoff axis.
    """
    _require_objective(pd)
    terms = pd.objective.terms
    if len(terms) != 2:
        raise SolverError(
            "hull mode needs an objective with exactly two quantities; "
            "introducing additional LP variables for them is recommended"
        )
    cols = []
    for t in terms:
        if t.coef != 1:
            warnings.warn(
                f"hull mode ignores the coefficient {t.coef:g} on {t.text}",
                stacklevel=3,
            )
        e = t.expr
        if e.al and not e.entropy and len(e.al) == 1:
            idx = next(iter(e.al))
            if e.al[idx] != 1:
                raise SolverError(f"{t.text} is not a single quantity")
            cols.append(instance.n_entropy_cols + idx)
        elif e.entropy and not e.al and len(e.entropy) == 1:
            mask, coef = next(iter(e.entropy.items()))
            if coef != 1:
                raise SolverError(
                    f"{t.text} is not a single joint entropy; "
                    "introducing additional LP variables for them is recommended"
                )
            col = instance.col_of_mask(mask)
            if col < 0:
                raise SolverError(f"{t.text} reduces to zero under the dependencies")
            cols.append(col)
        else:
            raise SolverError(
                f"{t.text} is not a single joint entropy or LP variable; "
                "introducing additional LP variables for them is recommended"
            )
    return cols[0], cols[1], (terms[0].text, terms[1].text)


def _pin_row(col, value):
    from .lp_build import SparseRow

    eps = 1e-9 * (1.0 + abs(value))
    return SparseRow(entries=((col, 1.0),), sense="<=", rhs=value + eps, kind="bound")


def run_hull(pd, instance, display=False):
    """Corner points of the lower-left boundary of the projection onto the
    two objective quantities, by recursive supporting-plane refinement."""
    q1, q2, labels = _axis_columns(pd, instance)
    ncols = instance.num_cols

    def vec(col, scale=1.0):
        return {col: scale}

    def minimize(coefs, extra=()):
        inst = instance.with_objective(coefs)
        if extra:
            inst = inst.with_extra_rows(extra)
        sol = solve_lp(inst, display=display)
        _require_optimal(sol, "a hull subproblem")
        return sol

    s1 = minimize(vec(q1))
    x_p = s1.objective_value
    s2 = minimize(vec(q2), extra=[_pin_row(q1, x_p)])
    p = HullPoint(x_p, s2.objective_value)
    s3 = minimize(vec(q2))
    y_q = s3.objective_value
    s4 = minimize(vec(q1), extra=[_pin_row(q2, y_q)])
    q = HullPoint(s4.objective_value, y_q)

    discovered = [p]
    if abs(p.x - q.x) > 1e-9 or abs(p.y - q.y) > 1e-9:
        discovered.append(q)

    def refine(a, b, depth):
        if depth > HULL_DEPTH_LIMIT:
            warnings.warn("hull refinement depth limit reached; emitting the segment",
                          stacklevel=2)
            return
        c1 = a.y - b.y
        c2 = b.x - a.x
        seg_val = c1 * a.x + c2 * a.y
        sol = minimize({q1: c1, q2: c2})
        val = sol.objective_value
        if val >= seg_val - 1e-7 * (1.0 + abs(seg_val)):
            return
        r = HullPoint(float(sol.primal[q1]), float(sol.primal[q2]))
        discovered.append(r)
        refine(a, r, depth + 1)
        refine(r, b, depth + 1)

    if len(discovered) == 2:
        refine(p, q, 0)
    points = sorted(discovered, key=lambda t: (t.x, t.y))
    return HullResult(points=points, discovered=discovered, labels=labels)


# ---------------------------------------------------------------------------
# prove mode


@dataclass
class ProofLine:
    weight: float
    row_text: str

    def render(self, k):
        return f"{k:03d}-th inequality: weight = {self.weight:.6f}{self.row_text}"


@dataclass
class Proof:
    weight_sum: float
    lines: list

    def render(self, header, target_line):
        out = [SEPARATOR, header, target_line]
        out += [pl.render(k + 1) for k, pl in enumerate(self.lines)]
        out.append(SEPARATOR)
        return out


@dataclass
class ProofPair:
    target_pretty: str
    index: int
    float_proof: Proof | None
    int_proof: Proof | None
    message: str | None = None
    int_message: str | None = None

    def render(self):
        if self.message:
            return [SEPARATOR, f"{self.index}-th inequality: {self.message}",
                    SEPARATOR]
        out = self.float_proof.render(
            f"LP dual value {self.float_proof.weight_sum:.6f}",
            f"Proved {self.index}-th inequality: {self.target_pretty}.",
        )
        if self.int_proof:
            out += self.int_proof.render(
                f"MIP dual value {self.int_proof.weight_sum:.6f}",
                f"Proved {self.index}-th inequality using integer values: "
                f"{self.target_pretty}.",
            )
        elif self.int_message:
            out += [SEPARATOR, f"{self.index}-th inequality: {self.int_message}",
                    SEPARATOR]
        return out


@dataclass
class ProveResult:
    proofs: list

    def render(self):
        lines = []
        for p in self.proofs:
            lines += p.render()
        return lines


def _coef_text(c):
    if c == 1.0:
        return ""
    if c == -1.0:
        return "-"
    return f"{c:.1f}" if c == round(c, 1) else f"{c:g}"


def _ge_row_text(entries, rhs, col_names):
    """Row rendered as '... >= 0' with the constant folded in and marked *."""
    parts = []
    for col, v in entries:
        parts.append(f"{_coef_text(v)}{col_names[col]}")
    if rhs != 0.0:
        c = -rhs
        body = f"{abs(c):.1f}" if c == round(c, 1) else f"{abs(c):g}"
        parts.append(("-" if c < 0 else "") + body + "*")
    return "".join("     " + p for p in parts) + ">=0"


def _converted_ge_rows(instance):
    """Every instance row in >= orientation; equalities split into two."""
    conv = []
    for row in instance.rows:
        if row.sense in (">=", "="):
            conv.append((row.entries, row.rhs))
        if row.sense in ("<=", "="):
            conv.append((tuple((c, -v) for c, v in row.entries), -row.rhs))
    return conv


def _weight_instance(instance, conv, target_entries, target_rhs):
    """LP over one nonnegative weight per converted row: the weighted rows
    must reproduce the target coefficients exactly, their right-hand sides
    must add to at least the target's, and the total weight is minimized.
    """
    from .lp_build import LPInstance, SparseRow

    by_col = {}
    rhs_entries = []
    for k, (entries, rhs) in enumerate(conv):
        for col, v in entries:
            by_col.setdefault(col, []).append((k, v))
        if rhs != 0.0:
            rhs_entries.append((k, rhs))
    target = dict(target_entries)
    rows = []
    for col in sorted(set(by_col) | set(target)):
        entries = tuple(sorted(by_col.get(col, ())))
        if not entries:
            if abs(target.get(col, 0.0)) > 1e-12:
                rows = None  # a target coefficient no row can produce
                break
            continue
        rows.append(SparseRow(entries=entries, sense="=",
                              rhs=float(target.get(col, 0.0)), kind="bound"))
    trivially_infeasible = False
    if rows is None:
        trivially_infeasible = True
        rows = []
    elif rhs_entries:
        rows.append(SparseRow(entries=tuple(sorted(rhs_entries)),
                              sense=">=", rhs=float(target_rhs), kind="bound"))
    elif target_rhs > 1e-12:
        trivially_infeasible = True  # no row carries a constant to reach the target
    return LPInstance(
        num_cols=len(conv),
        n_entropy_cols=0,
        col_names=[f"w{k}" for k in range(len(conv))],
        rows=rows,
        objective=np.ones(len(conv)),
        col_lower_bounds=np.zeros(len(conv)),
        rmap=instance.rmap,
        al_cols={},
        trivially_infeasible=trivially_infeasible,
    )


def _check_proof(conv, weights, target_entries, target_rhs, tol=1e-6):
    """Re-sum the weighted rows symbolically and compare with the target."""
    acc = {}
    rhs_acc = 0.0
    for w, (entries, rhs) in zip(weights, conv):
        if w <= tol:
            continue
        for col, v in entries:
            acc[col] = acc.get(col, 0.0) + w * v
        rhs_acc += w * rhs
    target = dict(target_entries)
    for col in set(acc) | set(target):
        if abs(acc.get(col, 0.0) - target.get(col, 0.0)) > tol:
            raise SolverError("proof verification failed: weighted rows do not "
                              "re-sum to the target inequality")
    if rhs_acc < target_rhs - tol:
        raise SolverError("proof verification failed: constant term falls short")


def _proof_from_weights(conv, weights, col_names, tol=1e-9):
    lines = []
    total = 0.0
    for k, w in enumerate(weights):
        if w > tol:
            entries, rhs = conv[k]
            lines.append(ProofLine(weight=float(w), row_text=_ge_row_text(
                entries, rhs, col_names)))
            total += float(w)
    return Proof(weight_sum=total, lines=lines)


CANNOT_PROVE = ("cannot be proved from Shannon-type inequalities "
                "and the given constraints")


def run_prove(pd, instance, display=False):
    """For each bound-to-prove, find nonnegative row weights whose weighted
    sum reproduces the bound; solved once in floats and once in integers."""
    if not pd.bp:
        raise SolverError("prove mode needs at least one bound to prove (key 'BP')")
    conv = _converted_ge_rows(instance)
    proofs = []
    for k, cb in enumerate(pd.bp, start=1):
        if cb.sense == "=":
            raise SolverError(
                f"bound to prove {cb.src!r} is an equality; prove the two "
                "inequalities separately"
            )
        sign = 1.0 if cb.sense == ">=" else -1.0
        target_entries = tuple(
            (col, sign * v)
            for col, v in reduce_expr(cb.lhs.expr, instance.rmap,
                                      instance.n_entropy_cols)
        )
        target_rhs = sign * cb.rhs
        winst = _weight_instance(instance, conv, target_entries, target_rhs)
        sol = solve_lp(winst, display=display)
        if sol.status != OPTIMAL:
            proofs.append(ProofPair(target_pretty=cb.pretty, index=k,
                                    float_proof=None, int_proof=None,
                                    message=f"{cb.pretty} {CANNOT_PROVE}"))
            continue
        _check_proof(conv, sol.primal, target_entries, target_rhs)
        float_proof = _proof_from_weights(conv, sol.primal, instance.col_names)
        int_proof = None
        int_message = None
        try:
            isol = solve_integer_weights(winst, display=display)
        except SolverError as exc:
            int_message = f"integer-weight proof not found ({exc})"
        else:
            if isol.status == OPTIMAL:
                _check_proof(conv, isol.primal, target_entries, target_rhs)
                int_proof = _proof_from_weights(conv, isol.primal,
                                                instance.col_names)
            else:
                int_message = "no all-integer weighting exists for this target"
        proofs.append(ProofPair(target_pretty=cb.pretty, index=k,
                                float_proof=float_proof, int_proof=int_proof,
                                int_message=int_message))
    return ProveResult(proofs=proofs)


# ---------------------------------------------------------------------------
# sensitivity mode


@dataclass
class SensitivityRange:
    target: str
    lo: float | None  # None = unbounded
    hi: float | None

    def _fmt(self, v):
        return "unbounded" if v is None else f"{v:.5f}"

    def render(self):
        return (f"Sensitivity {self.target:<25}= "
                f"[{self._fmt(self.lo)}, {self._fmt(self.hi)}]")


@dataclass
class SensitivityResult:
    objective_pretty: str
    optimal_value: float
    ranges: list

    def render(self):
        lines = [SEPARATOR,
                 f"Optimal value for {self.objective_pretty} = "
                 f"{self.optimal_value:.6f}.",
                 "Sensitivity results:"]
        lines += [r.render() for r in self.ranges]
        lines.append(SEPARATOR)
        return lines


def run_sensitivity(pd, instance, display=False):
    """Min and max of each target expression over the near-optimal face (the
    objective is pinned to its optimum plus a small slack)."""
    if not pd.se:
        raise SolverError("sensitivity mode needs at least one target (key 'SE')")
    _require_objective(pd)
    base = solve_lp(instance, display=display)
    _require_optimal(base, "the objective LP")
    vstar = base.objective_value
    delta = 1e-7 * (1.0 + abs(vstar))
    from .lp_build import SparseRow

    pin = SparseRow(
        entries=tuple((j, float(v)) for j, v in enumerate(instance.objective)
                      if v != 0.0),
        sense="<=",
        rhs=vstar + delta,
        kind="bound",
    )
    pinned = instance.with_extra_rows([pin])
    ranges = []
    for target in pd.se:
        coefs = dict(reduce_expr(target.expr, instance.rmap,
                                 instance.n_entropy_cols))
        lo_sol = solve_lp(pinned.with_objective(coefs), display=display)
        hi_sol = solve_lp(pinned.with_objective({c: -v for c, v in coefs.items()}),
                          display=display)
        if lo_sol.status == INFEASIBLE or hi_sol.status == INFEASIBLE:
            raise SolverError("sensitivity subproblem is infeasible")
        lo = lo_sol.objective_value + target.expr.const if lo_sol.status == OPTIMAL else None
        hi = -hi_sol.objective_value + target.expr.const if hi_sol.status == OPTIMAL else None
        ranges.append(SensitivityRange(target=target.pretty, lo=lo, hi=hi))
    return SensitivityResult(
        objective_pretty=pd.objective.pretty,
        optimal_value=vstar,
        ranges=ranges,
    )


# ---------------------------------------------------------------------------
# random mode


@dataclass
class RandomResult:
    objective_pretty: str
    optimal_value: float
    kept: int
    total_elemental: int
    seed: int
    fraction: float

    def render(self):
        return [
            SEPARATOR,
            f"Random constraint subset: kept {self.kept} of "
            f"{self.total_elemental} elemental inequalities "
            f"(seed {self.seed}, fraction {self.fraction:g}).",
            f"Optimal value for {self.objective_pretty} = "
            f"{self.optimal_value:.6f}.",
            SEPARATOR,
        ]


def run_random(pd, instance, seed=0, fraction=0.5, display=False):
    """Solve with a random subset of the elemental rows; problem-specific
    rows always stay.  A subset can only relax the program, so the value is
    a valid (possibly weaker) bound."""
    if not 0 < fraction <= 1:
        raise SolverError("fraction must be in (0, 1]")
    _require_objective(pd)
    rng = np.random.default_rng(seed)
    rows = []
    kept = 0
    total = 0
    for row in instance.rows:
        if row.kind == "elemental":
            total += 1
            if rng.random() < fraction:
                rows.append(row)
                kept += 1
        else:
            rows.append(row)
    sol = solve_lp(instance.with_rows(rows), display=display)
    _require_optimal(sol, "the random-subset LP")
    return RandomResult(
        objective_pretty=pd.objective.pretty,
        optimal_value=sol.objective_value,
        kept=kept,
        total_elemental=total,
        seed=seed,
        fraction=fraction,
    )
