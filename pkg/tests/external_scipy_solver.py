"""External-solver command for the adapter, backed by scipy's HiGHS.

Usage: python external_scipy_solver.py <problem.lp> <solution.sol>

Reads the LP interchange text the toolbox exports and writes the documented
solution format.  Test asset: lets the adapter path be exercised at scales
the bundled dense-basis engine cannot reach.
"""

import sys

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from entrolp.io_lp import parse_lp_text, write_solution_text


def main(lp_path, out_path):
    with open(lp_path) as fh:
        sense, objective, rows, bounds = parse_lp_text(fh.read())
    names = sorted(
        {nm for _r, coefs, _s, _rhs in rows for nm in coefs}
        | set(objective) | set(bounds)
    )
    index = {nm: j for j, nm in enumerate(names)}
    n = len(names)
    c = np.zeros(n)
    for nm, v in objective.items():
        c[index[nm]] = v
    if sense == "max":
        c = -c
    ub_d, ub_r, ub_c, ub_b = [], [], [], []
    eq_d, eq_r, eq_c, eq_b = [], [], [], []
    for rname, coefs, rel, rhs in rows:
        if rel == "=":
            rr, dd, cc, bb = eq_r, eq_d, eq_c, eq_b
            sign = 1.0
        else:
            rr, dd, cc, bb = ub_r, ub_d, ub_c, ub_b
            sign = 1.0 if rel == "<=" else -1.0
        r = len(bb)
        for nm, v in coefs.items():
            rr.append(r)
            cc.append(index[nm])
            dd.append(sign * v)
        bb.append(sign * rhs)
    kw = {}
    if ub_b:
        kw["A_ub"] = sparse.csr_matrix((ub_d, (ub_r, ub_c)), shape=(len(ub_b), n))
        kw["b_ub"] = np.array(ub_b)
    if eq_b:
        kw["A_eq"] = sparse.csr_matrix((eq_d, (eq_r, eq_c)), shape=(len(eq_b), n))
        kw["b_eq"] = np.array(eq_b)
    res = linprog(c, bounds=[(0, None)] * n, method="highs", **kw)
    if res.status == 0:
        obj = float(res.fun) * (-1.0 if sense == "max" else 1.0)
        text = write_solution_text("optimal", obj, list(zip(names, res.x)), [])
    elif res.status == 2:
        text = write_solution_text("infeasible", None, [], [])
    elif res.status == 3:
        text = write_solution_text("unbounded", None, [], [])
    else:
        text = write_solution_text("error", None, [], [])
    with open(out_path, "w") as fh:
        fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
