"""Exception types shared across the package."""


class SasakicheckError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(SasakicheckError):
    """A point, field or direction has the wrong chart dimension."""


class NonFiniteValueError(SasakicheckError):
    """A field evaluation produced a NaN or infinity."""


class EvaluationError(SasakicheckError):
    """A field could not be evaluated (e.g. the stencil left the chart)."""


class UnsupportedValenceError(SasakicheckError):
    """Covariant differentiation requested for a valence we do not carry."""


class SingularMetricError(SasakicheckError):
    """Metric determinant below threshold at the evaluation point."""


class RankDeficientError(SasakicheckError):
    """Embedding Jacobian does not have full column rank."""


class IllConditionedFrameError(SasakicheckError):
    """Tangent-plus-normal frame too ill conditioned to decompose against."""


class TangencyError(SasakicheckError):
    """A vector required to be tangent has a normal component above tolerance."""


class ExprParseError(SasakicheckError):
    """Expression text could not be parsed; carries the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class ConfigError(SasakicheckError):
    """Suite configuration is malformed or inconsistent."""
