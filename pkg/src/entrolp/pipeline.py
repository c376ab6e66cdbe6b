"""End-to-end execution: parse, modify, run options, reduce, assemble, and
dispatch to a computation mode.  Both the CLI and the HTTP service sit on
top of ``run_pipeline``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EntrolpError, PdSyntaxError, PdValidationError, SolverError, SymmetryError
from .lp_build import assemble, constraint_report_line
from .modes import run_hull, run_prove, run_random, run_regular, run_sensitivity
from .pdfile import apply_modifier, parse_file, parse_modifier, serialize
from .reduction import build_reduction_map, check_group, reduction_report_lines

MODES = ("regular", "hull", "random", "prove", "sensitivity")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SYMMETRY = 3
EXIT_SOLVER = 4
EXIT_USAGE = 5

USAGE = """\
usage: entrolp <pdfile> [regular|hull|random|prove|sensitivity] \
[modifier-json ...] [--seed N] [--fraction F]

The first argument is a problem-description file: the characters PD followed
by a JSON object with keys RV, AL, O, D, I, S, BC, BP, QU, SE, CMD, OPT.
The optional second argument picks the computation mode (default: regular).
Any further '{...}' arguments are command-line modifiers: plain keys replace
the matching PD section, '+'-prefixed keys append to it ('+O', 'CMD' and
'OPT' are not allowed).  --seed and --fraction configure random mode.

Options inside the PD (CMD/OPT keys or standalone commands after the JSON):
  SER [-a|-t file]  print or write the serialized problem description
  PDC               print the problem description (classic format replaced
                    by the modern serialization)
  CS                check that the symmetry rows form a permutation group
  LP_DISP           show solver iteration output
  ?                 print this usage text
"""

PDC_NOTICE = ("PDC: the classic version-0.1 format is not supported; "
              "printing the modern serialization instead.")


@dataclass
class PipelineResult:
    exit_code: int
    output: str
    error: str | None = None
    structured: dict = field(default_factory=dict)


def run_pipeline(text, mode="regular", modifiers=(), seed=0, fraction=0.5,
                 allow_file_output=True):
    """Run one full computation over PD file contents.

    Returns a PipelineResult; nothing is printed here so callers own the
    presentation (stdout for the CLI, JSON for the service).
    """
    lines = []
    structured = {}
    if mode not in MODES:
        return PipelineResult(EXIT_USAGE, USAGE, error=f"unknown mode {mode!r}")
    try:
        doc = parse_file(text)
        pd = doc.pd
        for src in modifiers:
            pd = apply_modifier(pd, parse_modifier(src))
    except (PdSyntaxError, PdValidationError) as exc:
        return PipelineResult(EXIT_PARSE, "", error=str(exc))

    if "CS" in pd.options:
        report = check_group(pd.sym, pd.rv_names)
        lines.append(report.message)
        if not report.ok:
            return PipelineResult(EXIT_SYMMETRY, "\n".join(lines) + "\n",
                                  error=report.message)
    if "HELP" in pd.options:
        lines.append(USAGE)
    if "PDC" in pd.options:
        lines.append(PDC_NOTICE)
        lines.append(serialize(pd).rstrip("\n"))
    if "SER" in pd.options:
        ser_text = serialize(pd)
        if pd.ser_target and allow_file_output:
            flag, path = pd.ser_target
            with open(path, "a" if flag == "-a" else "w", encoding="utf-8") as fh:
                fh.write(ser_text)
            lines.append(f"Problem description written to {path}.")
        else:
            lines.append(ser_text.rstrip("\n"))

    try:
        rmap = build_reduction_map(pd)
        lines.extend(reduction_report_lines(rmap, len(pd.al_names)))
        structured["elements_before"] = rmap.count_before
        structured["elements_after"] = rmap.count_after - 1 + len(pd.al_names)
        instance = assemble(pd, rmap)
        lines.append(constraint_report_line(instance))
        structured["constraints"] = instance.counts
        display = "LP_DISP" in pd.options

        if mode == "regular":
            result = run_regular(pd, instance, display=display)
            structured["optimal_value"] = result.optimal_value
            structured["queries"] = [[p, v] for p, v in result.queries]
        elif mode == "hull":
            result = run_hull(pd, instance, display=display)
            structured["points"] = [[p.x, p.y] for p in result.points]
            structured["labels"] = list(result.labels)
        elif mode == "prove":
            result = run_prove(pd, instance, display=display)
            structured["proofs"] = [
                {
                    "target": p.target_pretty,
                    "lp_dual_value": p.float_proof.weight_sum if p.float_proof else None,
                    "mip_dual_value": p.int_proof.weight_sum if p.int_proof else None,
                    "provable": p.float_proof is not None,
                }
                for p in result.proofs
            ]
        elif mode == "sensitivity":
            result = run_sensitivity(pd, instance, display=display)
            structured["optimal_value"] = result.optimal_value
            structured["ranges"] = [[r.target, r.lo, r.hi] for r in result.ranges]
        else:
            result = run_random(pd, instance, seed=seed, fraction=fraction,
                                display=display)
            structured["optimal_value"] = result.optimal_value
            structured["kept"] = result.kept
        if display and getattr(result, "solution", None) is not None:
            if result.solution.iteration_log:
                lines.append(result.solution.iteration_log)
        lines.extend(result.render())
    except SymmetryError as exc:
        return PipelineResult(EXIT_SYMMETRY, "\n".join(lines) + "\n", error=str(exc))
    except SolverError as exc:
        return PipelineResult(EXIT_SOLVER, "\n".join(lines) + "\n", error=str(exc))
    except EntrolpError as exc:
        return PipelineResult(EXIT_PARSE, "\n".join(lines) + "\n", error=str(exc))

    return PipelineResult(EXIT_OK, "\n".join(lines) + "\n", structured=structured)
