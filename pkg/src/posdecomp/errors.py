"""Exception hierarchy shared by every module.

Each class carries a stable ``code`` (used in CLI JSON error objects) and the
process exit code the CLI maps it to.
"""


class DecompError(Exception):
    code = "error"
    exit_code = 1


class PreconditionError(DecompError, ValueError):
    code = "precondition"
    exit_code = 2


class ArityError(PreconditionError):
    code = "arity_mismatch"


class ZeroDenominatorError(PreconditionError, ZeroDivisionError):
    code = "zero_denominator"


class NotPositiveError(PreconditionError):
    code = "not_positive"


class DenominatorVanishesError(PreconditionError):
    code = "denominator_vanishes"


class LinearDependenceError(PreconditionError):
    code = "linear_dependence"


class ParseError(PreconditionError):
    code = "syntax_error"

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class PrecisionExhausted(DecompError, ArithmeticError):
    code = "precision_exhausted"
    exit_code = 3


class WitnessSearchExhausted(DecompError):
    code = "witness_search_exhausted"


class RetryBudgetExhausted(DecompError):
    code = "retry_budget_exhausted"


class FieldInvariantError(DecompError):
    """A number field object failed its own invariants (construction bug)."""

    code = "field_invariant_violated"
