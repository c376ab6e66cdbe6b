"""Exception hierarchy for the toolbox."""


class EntrolpError(Exception):
    """Base class for all toolbox errors."""


class PdSyntaxError(EntrolpError):
    """Malformed problem-description file, expression, or modifier."""


class PdValidationError(EntrolpError):
    """Structurally valid input that violates a problem-description rule."""


class SymmetryError(EntrolpError):
    """The symmetry rows do not form a permutation group."""


class EvaluationError(EntrolpError):
    """An expression references a quantity with no available value."""


class SolverError(EntrolpError):
    """The solver could not produce a usable result."""
