"""LP interchange format export/import and the external-solver escape hatch.

The writer emits the common text LP format (Minimize / Subject To / Bounds /
End).  Column order is the assembled order and rows keep their deterministic
assembled order, so exports are bit-stable.  Entropy columns are named
``h<hex mask>`` (canonical-set bitmask in hex) and additional LP variables
``v_<name>``; rows are ``r<k>``.

An external solver is plugged in through a command template such as

    ENTROLP_SOLVER_CMD='mysolve {lp} {out}'

The command must write a solution file of the documented form::

    status optimal
    objective 0.625
    x <column-name> <value>     (one line per nonzero, others default to 0)
    dual <row-name> <value>     (optional, one line per nonzero)

``entrolp-refsolve`` is a self-contained implementation of that contract on
top of the reference simplex, so the adapter can be exercised end to end
without any third-party solver.
"""

from __future__ import annotations

import re
import shlex
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from .errors import SolverError
from .lp_build import LPInstance, SparseRow
from .reduction import ReductionMap

_SENSE_TEXT = {"<=": "<=", ">=": ">=", "=": "="}


def column_lp_names(instance):
    names = []
    for k, mask in enumerate(instance.rmap.reps):
        names.append(f"h{mask:x}")
    for nm in instance.col_names[instance.n_entropy_cols:]:
        names.append(f"v_{nm}")
    return names


def _terms_text(entries, names):
    parts = []
    for col, v in entries:
        sign = "-" if v < 0 else "+"
        parts.append(f"{sign} {abs(v):.17g} {names[col]}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def export_lp_text(instance, sense="min"):
    names = column_lp_names(instance)
    lines = ["\\ exported by entrolp", "Minimize" if sense == "min" else "Maximize"]
    obj_entries = tuple(
        (j, float(v)) for j, v in enumerate(instance.objective) if v != 0.0
    )
    if not obj_entries:
        obj_entries = ((0, 0.0),) if instance.num_cols else ()
    lines.append(" obj: " + _terms_text(obj_entries, names))
    lines.append("Subject To")
    for k, row in enumerate(instance.rows):
        lines.append(
            f" r{k}: " + _terms_text(row.entries, names)
            + f" {_SENSE_TEXT[row.sense]} {row.rhs:.17g}"
        )
    lines.append("Bounds")
    for j, lo in enumerate(instance.col_lower_bounds):
        if lo != 0.0:
            lines.append(f" {names[j]} >= {lo:.17g}")
    lines.append("End")
    return "\n".join(lines) + "\n"


_LP_TERM = re.compile(
    r"([+-])?\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*([A-Za-z_][A-Za-z0-9_]*)"
)
_LP_REL = re.compile(r"(<=|>=|=)\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*$")


def parse_lp_text(text):
    """Parse the subset of the LP format that export_lp_text produces.

    Returns (sense, objective: dict name->coef, rows: list of
    (name, dict name->coef, sense, rhs), bounds: dict name->lo).
    """
    section = None
    sense = "min"
    objective = {}
    rows = []
    bounds = {}
    for rawline in text.splitlines():
        line = rawline.split("\\")[0].strip()
        if not line:
            continue
        low = line.lower()
        if low in ("minimize", "maximise", "minimise", "maximize"):
            sense = "min" if low.startswith("mini") else "max"
            section = "obj"
            continue
        if low == "subject to":
            section = "rows"
            continue
        if low == "bounds":
            section = "bounds"
            continue
        if low == "end":
            break
        if section == "obj":
            _name, coefs = _parse_lp_terms(line)
            for nm, v in coefs.items():
                objective[nm] = objective.get(nm, 0.0) + v
        elif section == "rows":
            m = _LP_REL.search(line)
            if m is None:
                raise SolverError(f"constraint line without a relation: {line!r}")
            name, coefs = _parse_lp_terms(line[: m.start()])
            rows.append((name, coefs, m.group(1), float(m.group(2))))
        elif section == "bounds":
            toks = line.split()
            if len(toks) == 3 and toks[1] == ">=":
                bounds[toks[0]] = float(toks[2])
            else:
                raise SolverError(f"unsupported bound line {line!r}")
    return sense, objective, rows, bounds


def _parse_lp_terms(text):
    text = text.strip()
    name = None
    if ":" in text:
        name, text = text.split(":", 1)
        name = name.strip()
    coefs = {}
    for sign, num, var in _LP_TERM.findall(text):
        c = float(num) if num else 1.0
        if sign == "-":
            c = -c
        coefs[var] = coefs.get(var, 0.0) + c
    return name, coefs


def write_solution_text(status, objective, primal_items, dual_items):
    lines = [f"status {status}"]
    if objective is not None:
        lines.append(f"objective {objective:.17g}")
    for name, v in primal_items:
        if v != 0.0:
            lines.append(f"x {name} {v:.17g}")
    for name, v in dual_items:
        if v != 0.0:
            lines.append(f"dual {name} {v:.17g}")
    return "\n".join(lines) + "\n"


def parse_solution_text(text):
    status, objective = None, None
    primal, dual = {}, {}
    for line in text.splitlines():
        toks = line.split()
        if not toks:
            continue
        if toks[0] == "status":
            status = toks[1]
        elif toks[0] == "objective":
            objective = float(toks[1])
        elif toks[0] == "x":
            primal[toks[1]] = float(toks[2])
        elif toks[0] == "dual":
            dual[toks[1]] = float(toks[2])
    if status is None:
        raise SolverError("solution file has no status line")
    return status, objective, primal, dual


def solve_external(instance, sense, cmd_template):
    """Write the instance, run the configured solver command, read back."""
    from .solver import LPSolution

    names = column_lp_names(instance)
    with tempfile.TemporaryDirectory(prefix="entrolp_") as tmp:
        lp_path = Path(tmp) / "problem.lp"
        out_path = Path(tmp) / "solution.sol"
        lp_path.write_text(export_lp_text(instance, sense))
        argv = [
            tok.replace("{lp}", str(lp_path)).replace("{out}", str(out_path))
            for tok in shlex.split(cmd_template)
        ]
        proc = subprocess.run(argv, capture_output=True, text=True)
        if proc.returncode != 0:
            raise SolverError(
                f"external solver failed (exit {proc.returncode}): {proc.stderr.strip()}"
            )
        if not out_path.exists():
            raise SolverError("external solver produced no solution file")
        status, objective, primal, dual = parse_solution_text(out_path.read_text())
    if status != "optimal":
        return LPSolution(status, None, None, None)
    x = np.zeros(instance.num_cols)
    index = {nm: j for j, nm in enumerate(names)}
    for nm, v in primal.items():
        if nm not in index:
            raise SolverError(f"solution references unknown column {nm!r}")
        x[index[nm]] = v
    y = np.zeros(len(instance.rows))
    for nm, v in dual.items():
        if not nm.startswith("r"):
            raise SolverError(f"solution references unknown row {nm!r}")
        y[int(nm[1:])] = v
    return LPSolution(status, float(objective), x, y)


# ---------------------------------------------------------------------------
# reference-solver CLI honoring the external contract


def _instance_from_lp(text):
    sense, objective, rows, bounds = parse_lp_text(text)
    names = sorted(
        {nm for _r, coefs, _s, _rhs in rows for nm in coefs} | set(objective)
        | set(bounds)
    )
    index = {nm: j for j, nm in enumerate(names)}
    sparse_rows = []
    for rname, coefs, rel, rhs in rows:
        entries = tuple(sorted((index[nm], v) for nm, v in coefs.items() if v != 0.0))
        sparse_rows.append(SparseRow(entries=entries, sense=rel, rhs=rhs, kind="bound"))
    obj = np.zeros(len(names))
    for nm, v in objective.items():
        obj[index[nm]] = v
    lower = np.zeros(len(names))
    for nm, v in bounds.items():
        lower[index[nm]] = v
    if np.any(lower != 0.0):
        raise SolverError("only zero lower bounds are supported")
    rmap = ReductionMap(n=0, canon=np.zeros(1, dtype=np.int64), index_of={},
                        count_before=1, count_after=1)
    inst = LPInstance(
        num_cols=len(names),
        n_entropy_cols=0,
        col_names=names,
        rows=sparse_rows,
        objective=obj,
        col_lower_bounds=lower,
        rmap=rmap,
        al_cols={},
    )
    return inst, names, sense


def refsolve_main(argv=None):
    """Console entry: entrolp-refsolve <problem.lp> <solution.sol>"""
    from .solver import solve_lp

    args = list(sys.argv[1:] if argv is None else argv)
    if len(args) != 2:
        print("usage: entrolp-refsolve <problem.lp> <solution.sol>", file=sys.stderr)
        return 2
    text = Path(args[0]).read_text()
    inst, names, sense = _instance_from_lp(text)
    sol = solve_lp(inst, sense=sense, allow_external=False)
    if sol.status == "optimal":
        out = write_solution_text(
            sol.status,
            sol.objective_value,
            list(zip(names, sol.primal)),
            [(f"r{k}", v) for k, v in enumerate(sol.dual)],
        )
    else:
        out = write_solution_text(sol.status, None, [], [])
    Path(args[1]).write_text(out)
    return 0


if __name__ == "__main__":
    raise SystemExit(refsolve_main())
