"""Exception types shared across the engine.

Every error carries a short machine-readable ``code`` which the CLI emits
on stderr as a JSON line.
"""


class TightHilbError(Exception):
    code = "ERROR"
    line = None
    col = None

    def at(self, line: int, col: int) -> "TightHilbError":
        """Attach a 1-based source position (used by the script parser)."""
        self.line, self.col = line, col
        return self

    def to_record(self) -> dict:
        rec = {"error": self.code, "message": str(self)}
        if self.line is not None:
            rec.update(line=self.line, col=self.col)
        return rec


class DivisionByZero(TightHilbError, ZeroDivisionError):
    code = "DIVISION_BY_ZERO"


class NotPrime(TightHilbError, ValueError):
    code = "NOT_PRIME"


class ArityError(TightHilbError, ValueError):
    code = "ARITY_MISMATCH"


class DomainError(TightHilbError, ValueError):
    code = "DOMAIN_ERROR"


class NotMPrimary(TightHilbError):
    """The ideal is not primary to the maximal ideal at the origin."""

    code = "NOT_M_PRIMARY"


class ParameterError(TightHilbError, ValueError):
    code = "PARAMETER_ERROR"


class NoStableWindow(TightHilbError):
    """Table values never settle onto a polynomial inside the tabulated range."""

    code = "NO_STABLE_WINDOW"


class DimViolation(TightHilbError):
    code = "DIM_VIOLATION"


class AssumptionViolated(TightHilbError):
    code = "ASSUMPTION_VIOLATED"


class BudgetExhausted(TightHilbError):
    """Raised internally when a linear-algebra problem exceeds the monomial cap."""

    code = "BUDGET_EXHAUSTED"


class DslSyntaxError(TightHilbError):
    code = "SYNTAX_ERROR"


class UndefinedIdentifier(TightHilbError):
    code = "UNDEFINED_IDENTIFIER"


class CharacteristicMismatch(TightHilbError):
    code = "CHARACTERISTIC_MISMATCH"
