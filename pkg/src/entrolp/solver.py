"""Solver adapter: a neutral interface over the reference simplex engine and
an optional external solver command.

``solve_lp`` picks the cheaper formulation automatically: instances with many
more rows than columns (the usual shape after elemental generation) are
solved through their dual, whose basis has one row per column; the primal
vertex and the row multipliers are both recovered from the one solve.

Setting the environment variable ``ENTROLP_SOLVER_CMD`` to a command template
containing ``{lp}`` and ``{out}`` placeholders routes solves through an
external solver via the LP interchange format (see ``io_lp``).
"""

from __future__ import annotations

import heapq
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .lp_build import SparseRow
from .simplex import CscMatrix, solve_standard

ENV_SOLVER_CMD = "ENTROLP_SOLVER_CMD"

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPSolution:
    status: str
    objective_value: float | None
    primal: np.ndarray | None
    dual: np.ndarray | None  # one multiplier per instance row (>= orientation)
    iteration_log: str | None = None


def _normalized_rows(instance):
    """Rows as (entries, rhs, is_eq, flipped): inequalities oriented to >=."""
    out = []
    for row in instance.rows:
        if row.sense == "=":
            out.append((row.entries, row.rhs, True, False))
        elif row.sense == ">=":
            out.append((row.entries, row.rhs, False, False))
        else:
            flipped = tuple((c, -v) for c, v in row.entries)
            out.append((flipped, -row.rhs, False, True))
    return out


def solve_lp(instance, sense="min", display=False, allow_external=True):
    """Solve the instance; duals are reported against the >=-oriented rows so
    optimal multipliers of a minimization are nonnegative on inequalities."""
    if instance.trivially_infeasible:
        return LPSolution(INFEASIBLE, None, None, None)
    if sense not in ("min", "max"):
        raise SolverError(f"unknown sense {sense!r}")
    cmd = os.environ.get(ENV_SOLVER_CMD) if allow_external else None
    if cmd:
        from .io_lp import solve_external

        return solve_external(instance, sense, cmd)
    c = instance.objective if sense == "min" else -instance.objective
    rows = _normalized_rows(instance)
    d = instance.num_cols
    if len(rows) > d:
        sol = _solve_via_dual(rows, c, d, display)
    else:
        sol = _solve_direct(rows, c, d, display)
    if sense == "max" and sol.status == OPTIMAL:
        sol.objective_value = -sol.objective_value
    return sol


def _solve_direct(rows, c, d, display, feasibility_only=False):
    """Standard form with a surplus column per inequality row."""
    m = len(rows)
    cols = [[] for _ in range(d)]
    for r, (entries, _rhs, _eq, _fl) in enumerate(rows):
        for col, v in entries:
            cols[col].append((r, v))
    col_specs = [(np.array([rc[0] for rc in cc], dtype=np.int64),
                  np.array([rc[1] for rc in cc])) for cc in cols]
    surplus_of_row = {}
    for r, (_e, _rhs, eq, _fl) in enumerate(rows):
        if not eq:
            surplus_of_row[r] = d + len(surplus_of_row)
            col_specs.append((np.array([r], dtype=np.int64), np.array([-1.0])))
    A = CscMatrix.from_columns(m, col_specs)
    b = np.array([rhs for _e, rhs, _eq, _fl in rows])
    c_std = np.concatenate([c, np.zeros(len(surplus_of_row))])
    res = solve_standard(A, b, c_std, display=display,
                         feasibility_only=feasibility_only)
    if feasibility_only or res.status != OPTIMAL:
        return LPSolution(res.status, None, None, None,
                          "\n".join(res.log) if display else None)
    x = res.x[:d]
    return LPSolution(OPTIMAL, float(c @ x), x, res.y,
                      "\n".join(res.log) if display else None)


def _solve_via_dual(rows, c, d, display):
    """Solve max b.y s.t. A^T y <= c (y >= 0 on inequality rows, free on
    equality rows) and read the primal vertex off the dual multipliers."""
    m = len(rows)
    col_specs = []
    costs = []
    owner = []  # (kind, row_index, sign)
    for r, (entries, rhs, eq, _fl) in enumerate(rows):
        ridx = np.array([col for col, _v in entries], dtype=np.int64)
        vals = np.array([v for _col, v in entries])
        col_specs.append((ridx, vals))
        costs.append(-rhs)
        owner.append(("row", r, 1.0))
        if eq:
            col_specs.append((ridx, -vals))
            costs.append(rhs)
            owner.append(("row", r, -1.0))
    hint = [None] * d
    for j in range(d):
        col_specs.append((np.array([j], dtype=np.int64), np.array([1.0])))
        costs.append(0.0)
        owner.append(("slack", j, 1.0))
        if c[j] >= 0:
            hint[j] = len(col_specs) - 1
    A = CscMatrix.from_columns(d, col_specs)
    res = solve_standard(A, np.asarray(c, dtype=np.float64), np.array(costs),
                         identity_hint=hint, display=display)
    log = "\n".join(res.log) if display else None
    if res.status == UNBOUNDED:
        return LPSolution(INFEASIBLE, None, None, None, log)
    if res.status == INFEASIBLE:
        # dual infeasible: the primal is unbounded if feasible at all
        probe = _solve_direct(rows, c, d, display=False, feasibility_only=True)
        status = UNBOUNDED if probe.status == OPTIMAL else INFEASIBLE
        return LPSolution(status, None, None, None, log)
    x = np.maximum(-res.y, 0.0)
    duals = np.zeros(m)
    for v, (kind, idx, sign) in zip(res.x, owner):
        if kind == "row":
            duals[idx] += sign * v
    return LPSolution(OPTIMAL, float(np.dot(c, x)), x, duals, log)


def duality_gap(instance, sol, sense="min"):
    """Relative gap between primal objective and the dual bound implied by
    the returned multipliers; small at every optimal solve."""
    if sol.status != OPTIMAL:
        raise SolverError("duality gap needs an optimal solution")
    rows = _normalized_rows(instance)
    dual_obj = float(sum(y * rhs for y, (_e, rhs, _eq, _fl) in zip(sol.dual, rows)))
    primal_obj = sol.objective_value if sense == "min" else -sol.objective_value
    return abs(primal_obj - dual_obj) / (1.0 + abs(primal_obj))


# ---------------------------------------------------------------------------
# integer weight search (branch and bound on the weight-finding LP)


def _integral_enough(x, tol=1e-7):
    return bool(np.all(np.abs(x - np.round(x)) <= tol))


def _row_value(entries, x):
    return sum(v * x[col] for col, v in entries)


def _verify_solution(instance, x, tol=1e-6):
    for row in instance.rows:
        val = _row_value(row.entries, x)
        if row.sense == ">=" and val < row.rhs - tol:
            return False
        if row.sense == "<=" and val > row.rhs + tol:
            return False
        if row.sense == "=" and abs(val - row.rhs) > tol:
            return False
    return bool(np.all(x >= -tol))


def solve_integer_weights(instance, node_limit=400, display=False):
    """All-integer optimum of a weight-finding program (columns bounded below
    by zero).  The LP relaxation usually lands on an integral vertex already;
    otherwise branch and bound on the most fractional weight.

    Weight programs have an all-ones objective, so node bounds are rounded up
    to the next integer before pruning; the search typically closes as soon
    as one integer solution is found.
    """
    root = solve_lp(instance, display=display)
    if root.status != OPTIMAL:
        return root
    if _integral_enough(root.primal):
        x = np.round(root.primal)
        if _verify_solution(instance, x):
            return LPSolution(OPTIMAL, float(instance.objective @ x), x, root.dual,
                              root.iteration_log)

    integral_objective = _integral_enough(instance.objective, tol=1e-12)

    def tighten(bound):
        return math.ceil(bound - 1e-6) if integral_objective else bound

    best = None
    counter = 0
    heap = [(root.objective_value, counter, [], root)]
    nodes = 0
    while heap:
        bound, _cnt, extra, sol = heapq.heappop(heap)
        if best is not None and tighten(bound) >= best[0] - 1e-9:
            continue
        nodes += 1
        if nodes > node_limit:
            raise SolverError("integer weight search exceeded the node budget")
        frac = np.abs(sol.primal - np.round(sol.primal))
        j = int(np.argmax(frac))
        if frac[j] <= 1e-7:
            x = np.round(sol.primal)
            if _verify_solution(instance, x):
                val = float(instance.objective @ x)
                if best is None or val < best[0]:
                    best = (val, x)
            continue
        v = sol.primal[j]
        for entries, sense, rhs in (
            (((j, 1.0),), "<=", math.floor(v)),
            (((j, 1.0),), ">=", math.ceil(v)),
        ):
            branch = extra + [SparseRow(entries=entries, sense=sense, rhs=float(rhs),
                                        kind="bound")]
            child = solve_lp(instance.with_extra_rows(branch))
            if child.status != OPTIMAL:
                continue
            if best is not None and tighten(child.objective_value) >= best[0] - 1e-9:
                continue
            if _integral_enough(child.primal):
                x = np.round(child.primal)
                if _verify_solution(instance, x):
                    val = float(instance.objective @ x)
                    if best is None or val < best[0]:
                        best = (val, x)
                    continue
            counter += 1
            heapq.heappush(heap, (child.objective_value, counter, branch, child))
    if best is None:
        return LPSolution(INFEASIBLE, None, None, None)
    return LPSolution(OPTIMAL, best[0], best[1], None)
