"""Domain model: variable sets as bitmasks, linear expressions over joint
entropies and additional LP variables, and the problem description itself.

A subset of the random variables is represented as a plain ``int`` bitmask
with bit ``k`` standing for the k-th name in ``rv_names``.  Everything that
follows (reduction, LP assembly, proofs) indexes joint entropies by these
masks, so the number of random variables is capped at ``MAX_RVS`` to keep a
mask inside one machine word.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .errors import EvaluationError, PdValidationError

MAX_RVS = 30

# coefficients at or below this magnitude are treated as cancelled
ZERO_TOL = 1e-12


def varset(names, index):
    """Bitmask for an iterable of RV names given the name -> bit map."""
    m = 0
    for nm in names:
        m |= 1 << index[nm]
    return m


def varset_names(mask, rv_names):
    """Names of the RVs in a bitmask, in declaration order."""
    return [rv_names[b] for b in range(len(rv_names)) if mask >> b & 1]


def popcount(mask):
    return int(mask).bit_count()


class LinearExpr:
    """Sparse linear combination of joint-entropy terms, additional LP
    variables, and a constant.

    Canonical form: no zero coefficients are stored and the empty set never
    appears as an entropy key (H of nothing is identically zero).
    """

    __slots__ = ("entropy", "al", "const")

    def __init__(self, entropy=None, al=None, const=0.0):
        self.entropy = {}
        self.al = {}
        self.const = float(const)
        if entropy:
            for m, c in entropy.items():
                self.add_entropy(m, c)
        if al:
            for i, c in al.items():
                self.add_al(i, c)

    def add_entropy(self, mask, coef):
        if mask == 0:
            return self  # H(empty) = 0
        c = self.entropy.get(mask, 0.0) + coef
        if abs(c) <= ZERO_TOL:
            self.entropy.pop(mask, None)
        else:
            self.entropy[mask] = c
        return self

    def add_al(self, al_index, coef):
        c = self.al.get(al_index, 0.0) + coef
        if abs(c) <= ZERO_TOL:
            self.al.pop(al_index, None)
        else:
            self.al[al_index] = c
        return self

    def add(self, other, scale=1.0):
        for m, c in other.entropy.items():
            self.add_entropy(m, scale * c)
        for i, c in other.al.items():
            self.add_al(i, scale * c)
        self.const += scale * other.const
        return self

    def scaled(self, factor):
        out = LinearExpr()
        out.add(self, factor)
        return out

    def is_empty(self):
        return not self.entropy and not self.al and abs(self.const) <= ZERO_TOL

    def __eq__(self, other):
        if not isinstance(other, LinearExpr):
            return NotImplemented
        return (
            self.entropy == other.entropy
            and self.al == other.al
            and abs(self.const - other.const) <= ZERO_TOL
        )

    def __hash__(self):
        raise TypeError("LinearExpr is mutable; not hashable")

    def __repr__(self):
        return f"LinearExpr(entropy={self.entropy!r}, al={self.al!r}, const={self.const!r})"


def expand_conditional_entropy(left, given):
    """H(left | given) written over joint entropies: H(left+given) - H(given)."""
    if left == 0:
        raise PdValidationError("conditional entropy with an empty left side")
    e = LinearExpr()
    e.add_entropy(left | given, 1.0)
    e.add_entropy(given, -1.0)
    return e


def expand_mutual_information(a, b, given=0):
    """I(a ; b | given) over joint entropies, with equal subsets merged."""
    if a == 0 or b == 0:
        raise PdValidationError("mutual information with an empty argument")
    e = LinearExpr()
    e.add_entropy(a | given, 1.0)
    e.add_entropy(b | given, 1.0)
    e.add_entropy(a | b | given, -1.0)
    e.add_entropy(given, -1.0)
    return e


def independence_to_expr(ind):
    """Equality body for a (conditional) independence: the returned expression
    is constrained to zero.  Degenerate inputs (everything cancels) are legal
    but almost certainly a modelling slip, so they warn.
    """
    if len(ind.independent) < 2:
        raise PdValidationError("independence needs at least two variables")
    e = LinearExpr()
    union = ind.given
    for bit in ind.independent:
        e.add_entropy((1 << bit) | ind.given, 1.0)
        union |= 1 << bit
    e.add_entropy(union, -1.0)
    e.add_entropy(ind.given, -(len(ind.independent) - 1))
    if e.is_empty():
        warnings.warn("independence relation reduces to 0 = 0", stacklevel=2)
    return e


def expr_eval(expr, entropy_values, al_values):
    """Evaluate an expression against explicit per-term values."""
    total = expr.const
    for m, c in expr.entropy.items():
        if m not in entropy_values:
            raise EvaluationError(f"no value for joint entropy term with mask {m:#x}")
        total += c * entropy_values[m]
    for i, c in expr.al.items():
        if i not in al_values:
            raise EvaluationError(f"no value for additional LP variable #{i}")
        total += c * al_values[i]
    return total


@dataclass(frozen=True)
class SourcedExpr:
    """A parsed expression together with its source text, a normalized
    rendering used for human-facing output, and the term-level breakdown
    (needed to recognize the two tradeoff quantities in hull mode)."""

    source: str
    pretty: str
    expr: LinearExpr
    terms: tuple = ()

    def __eq__(self, other):
        if not isinstance(other, SourcedExpr):
            return NotImplemented
        return self.source == other.source and self.expr == other.expr


@dataclass(frozen=True)
class Dependency:
    """H(dependent | given) = 0: the dependent variables are a function of
    the given ones."""

    dependent: int
    given: int

    def __post_init__(self):
        if self.dependent == 0:
            raise PdValidationError("dependency with an empty dependent set")
        if self.dependent & self.given:
            raise PdValidationError("dependency with overlapping dependent and given sets")


@dataclass(frozen=True)
class Independence:
    """The listed single variables are mutually independent given ``given``."""

    independent: tuple
    given: int

    def __post_init__(self):
        if len(self.independent) < 2:
            raise PdValidationError("independence needs at least two variables")
        if len(set(self.independent)) != len(self.independent):
            raise PdValidationError("independence lists a variable twice")


@dataclass(frozen=True)
class SymmetryGroup:
    """Permutation rows over the RV indices; ``perms[r][j]`` is the image of
    variable ``j`` under row ``r``.  Group structure (identity, closure) is
    checked by ``reduction.check_group``, not at construction."""

    perms: tuple

    def __post_init__(self):
        for row in self.perms:
            if sorted(row) != list(range(len(row))):
                raise PdValidationError("symmetry row is not a permutation")

    @property
    def nontrivial(self):
        return len(self.perms) > 0


@dataclass(frozen=True)
class ConstantBound:
    """lhs (sense) rhs, with a numeric right-hand side.  ``src`` keeps the
    inequality exactly as written so serialization round-trips."""

    lhs: SourcedExpr
    sense: str
    rhs: float
    src: str = ""

    def __post_init__(self):
        if self.sense not in ("<=", ">=", "="):
            raise PdValidationError(f"unknown relation {self.sense!r}")
        if not isinstance(self.rhs, (int, float)) or self.rhs != self.rhs:
            raise PdValidationError("right-hand side must be a finite number")

    @property
    def pretty(self):
        rhs = f"{self.rhs:g}"
        return f"{self.lhs.pretty} {self.sense} {rhs}"


# options recognized in CMD/OPT and as standalone commands
OPTION_NAMES = ("SER", "PDC", "CS", "LP_DISP", "HELP")


@dataclass
class ProblemDescription:
    """Fully validated problem description."""

    rv_names: list
    al_names: list
    objective: SourcedExpr | None = None
    deps: list = field(default_factory=list)
    indeps: list = field(default_factory=list)
    sym: SymmetryGroup = SymmetryGroup(())
    bc: list = field(default_factory=list)
    bp: list = field(default_factory=list)
    qu: list = field(default_factory=list)
    se: list = field(default_factory=list)
    options: set = field(default_factory=set)
    ser_target: tuple | None = None  # ("-a"|"-t", path) or None for stdout

    def __post_init__(self):
        if len(self.rv_names) > MAX_RVS:
            raise PdValidationError(f"at most {MAX_RVS} random variables are supported")
        for o in self.options:
            if o not in OPTION_NAMES:
                raise PdValidationError(f"unknown option {o!r}")

    @property
    def n(self):
        return len(self.rv_names)

    @property
    def rv_index(self):
        return {nm: k for k, nm in enumerate(self.rv_names)}

    @property
    def al_index(self):
        return {nm: k for k, nm in enumerate(self.al_names)}

    def __eq__(self, other):
        if not isinstance(other, ProblemDescription):
            return NotImplemented
        return (
            self.rv_names == other.rv_names
            and self.al_names == other.al_names
            and self.objective == other.objective
            and self.deps == other.deps
            and self.indeps == other.indeps
            and set(self.sym.perms) == set(other.sym.perms)
            and self.bc == other.bc
            and self.bp == other.bp
            and self.qu == other.qu
            and self.se == other.se
            and self.options == other.options
        )
