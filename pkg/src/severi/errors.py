"""Exception hierarchy.

Every error raised on purpose by the package derives from ``SeveriError``.
Genericity failures of the birational constructions derive from
``GateError`` and carry the name of the gate plus, once they cross the
product-map pipeline, the stage at which they fired.
"""

from __future__ import annotations


class SeveriError(Exception):
    """Base class for all package errors."""


# -- finite fields -----------------------------------------------------------

class NotPrime(SeveriError, ValueError):
    pass


class DegreeTooLarge(SeveriError, ValueError):
    pass


class FieldTooLarge(DegreeTooLarge):
    """p**D exceeds the configured field-size bound (SB_MAX_FIELD)."""


class DivisionByZero(SeveriError, ZeroDivisionError):
    pass


class ContextMismatch(SeveriError, ValueError):
    pass


class BadSubfieldDegree(SeveriError, ValueError):
    pass


# -- projective geometry -----------------------------------------------------

class AmbientMismatch(SeveriError, ValueError):
    pass


class ZeroVector(SeveriError, ValueError):
    """All coordinates of a would-be projective point vanish."""


class BadDimensionSum(SeveriError, ValueError):
    pass


class NotSpanning(SeveriError, ValueError):
    pass


class DegenerateConstraint(SeveriError, ValueError):
    pass


class PointNotOnSubspace(SeveriError, ValueError):
    pass


class MalformedInput(SeveriError, ValueError):
    pass


class GateError(SeveriError):
    """A point fell outside the dense open set where a map is defined."""

    gate = "Gate"

    def __init__(self, message: str = "", stage: str | None = None):
        super().__init__(message)
        self.stage = stage

    def __str__(self) -> str:
        msg = super().__str__()
        if self.stage:
            return f"[{self.stage}] {self.gate}: {msg}"
        return f"{self.gate}: {msg}"


class PointInCenter(GateError):
    gate = "PointInCenter"


class NotGeneral(GateError):
    gate = "NotGeneral"


class IndeterminacyLocus(GateError):
    gate = "IndeterminacyLocus"


class NotInBigCell(GateError):
    gate = "NotInBigCell"


class DegenerateOrbit(GateError):
    gate = "DegenerateOrbit"


class OutsideChart(GateError):
    gate = "OutsideChart"


class UnexpectedMeetDimension(GateError):
    gate = "UnexpectedMeetDimension"


# -- configuration -----------------------------------------------------------

class ConfigError(SeveriError, ValueError):
    pass


# -- Brauer group ------------------------------------------------------------

class ReciprocityViolated(SeveriError, ValueError):
    pass


class RealInvariantInvalid(SeveriError, ValueError):
    pass


class DuplicatePlace(SeveriError, ValueError):
    pass


class SubgroupTooLarge(SeveriError, RuntimeError):
    pass


class NotCoprime(SeveriError, ValueError):
    pass


class BadFactorization(SeveriError, ValueError):
    pass


class DimensionMismatch(SeveriError, ValueError):
    pass


class InvalidVariety(SeveriError, ValueError):
    """index(cls) does not divide dim + 1."""


# -- certificates ------------------------------------------------------------

class NotApplicable(SeveriError, ValueError):
    pass


class PreconditionFailed(SeveriError, ValueError):
    pass
