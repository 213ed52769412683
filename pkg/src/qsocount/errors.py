"""Exception hierarchy. Every domain error carries a module-qualified code
that the CLI prints on stderr before exiting with status 1."""


class QsoError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "qsocount/error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class StructureSyntaxError(QsoError):
    code = "structures/syntax"

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class StructureValidationError(QsoError):
    code = "structures/invalid"


class FormulaSyntaxError(QsoError):
    code = "logic/syntax"


class FormulaValidationError(QsoError):
    code = "logic/invalid"


class NormalizationError(QsoError):
    code = "logic/normalize"


class EvalError(QsoError):
    code = "eval/invalid"


class BudgetExceededError(QsoError):
    code = "eval/budget"


class PropFormatError(QsoError):
    code = "propcount/format"


class PropGuardError(QsoError):
    code = "propcount/guard"


class ReductionError(QsoError):
    code = "reductions/invalid"


class EncodingError(QsoError):
    code = "reductions/encode"


class ApproxError(QsoError):
    code = "approx/invalid"
