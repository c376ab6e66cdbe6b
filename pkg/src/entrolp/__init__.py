"""entrolp: reduced entropy-LP computations for coding problems.

Reads a problem-description file, fuses joint-entropy variables under
functional dependencies and symmetry orbits, assembles the elemental-
inequality LP, and computes bounding planes with solution queries,
two-quantity tradeoff hulls, duality proofs, and sensitivity ranges.
"""

from .errors import (
    EntrolpError,
    EvaluationError,
    PdSyntaxError,
    PdValidationError,
    SolverError,
    SymmetryError,
)
from .exprparse import parse_expression, parse_inequality
from .lp_build import LPInstance, SparseRow, assemble, elemental_count, gen_elemental
from .model import (
    ConstantBound,
    Dependency,
    Independence,
    LinearExpr,
    ProblemDescription,
    SymmetryGroup,
    expand_conditional_entropy,
    expand_mutual_information,
    expr_eval,
    independence_to_expr,
)
from .modes import (
    HullPoint,
    run_hull,
    run_prove,
    run_random,
    run_regular,
    run_sensitivity,
)
from .pdfile import (
    Modifier,
    PdDocument,
    apply_modifier,
    parse_file,
    parse_modifier,
    serialize,
)
from .pipeline import run_pipeline
from .reduction import (
    ReductionMap,
    build_reduction_map,
    check_group,
    dependency_closure,
)
from .solver import LPSolution, solve_integer_weights, solve_lp

__version__ = "0.1.0"

__all__ = [
    "ConstantBound",
    "Dependency",
    "EntrolpError",
    "EvaluationError",
    "HullPoint",
    "Independence",
    "LinearExpr",
    "LPInstance",
    "LPSolution",
    "Modifier",
    "PdDocument",
    "PdSyntaxError",
    "PdValidationError",
    "ProblemDescription",
    "ReductionMap",
    "SolverError",
    "SparseRow",
    "SymmetryError",
    "SymmetryGroup",
    "apply_modifier",
    "assemble",
    "build_reduction_map",
    "check_group",
    "dependency_closure",
    "elemental_count",
    "expand_conditional_entropy",
    "expand_mutual_information",
    "expr_eval",
    "gen_elemental",
    "independence_to_expr",
    "parse_expression",
    "parse_file",
    "parse_inequality",
    "parse_modifier",
    "run_hull",
    "run_pipeline",
    "run_prove",
    "run_random",
    "run_regular",
    "run_sensitivity",
    "serialize",
    "solve_integer_weights",
    "solve_lp",
]
