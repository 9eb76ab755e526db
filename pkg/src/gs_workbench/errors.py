"""Exception hierarchy.

Every failure the workbench reports derives from WorkbenchError. Each class
carries the process exit code the command-line front end maps it to, so the
mapping lives in exactly one place.
"""


class WorkbenchError(Exception):
    """Base class of all workbench errors."""

    exit_code: int = 1


class InputError(WorkbenchError):
    """The caller supplied something the workbench cannot accept."""

    exit_code = 2


class MalformedScalar(InputError):
    """Scalar text does not match the integer or fraction syntax."""


class ZeroDenominator(InputError):
    """A fraction with denominator zero."""


class NotInField(InputError):
    """A rational value has no image in the requested prime field."""


class SchemaError(InputError):
    """A JSON document does not conform to its schema."""

    def __init__(self, pointer: str, message: str) -> None:
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.message = message


class ShapeMismatch(InputError):
    """Matrix or tensor shapes are incompatible."""


class DegreeMismatch(InputError):
    """Tensor degrees of consecutive layers or cochains do not line up."""


class UnknownCochainRef(InputError):
    """A tensor word references a cochain that was not supplied."""


class IndexOutOfRange(InputError):
    """A face, degeneracy or basis index is outside its valid range."""


class ArityError(InputError):
    """An operadic composition was requested at an invalid position or arity."""


class InvalidGroupTable(InputError):
    """A multiplication table does not define a group."""


class BadCharacteristic(InputError):
    """The field characteristic excludes the requested construction."""


class NotInvolutive(InputError):
    """A cyclic construction was requested for an algebra with S^2 != id."""


class NotACocycle(InputError):
    """An operation that needs a cocycle was given something else."""


class ArithmeticFailure(WorkbenchError, ArithmeticError):
    """Exact arithmetic was asked for something undefined."""

    exit_code = 2


class DivisionByZero(ArithmeticFailure):
    """Division by the zero element of a field."""


class MixedFields(ArithmeticFailure):
    """Operands live over different fields."""


class AxiomViolation(WorkbenchError):
    """A Hopf algebra fails one or more of its axioms."""

    exit_code = 3

    def __init__(self, algebra: str, failed: list[str]) -> None:
        super().__init__(f"{algebra}: axiom violation ({', '.join(failed)})")
        self.algebra = algebra
        self.failed = failed


class ResourceLimit(WorkbenchError):
    """A computation would exceed the configured resource guard."""

    exit_code = 4

    def __init__(self, what: str, estimate: int, limit: int) -> None:
        super().__init__(f"{what}: estimate {estimate} exceeds limit {limit}")
        self.what = what
        self.estimate = estimate
        self.limit = limit


class CrossCheckFailure(WorkbenchError):
    """Two independent constructions of the same object disagree."""

    exit_code = 1
