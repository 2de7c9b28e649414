"""Exception and warning types shared across the package."""


class DelayCtrlError(Exception):
    """Base class for all errors raised by this package."""


class ZeroDelay(DelayCtrlError):
    """A delay vector row is entirely zero, which would give a zero delay."""


class NonPositiveBasis(DelayCtrlError):
    """A delay basis value is zero or negative."""


class RankDeficientBasis(DelayCtrlError):
    """The integer matrix tying delays to the basis has rational rank < h."""


class DimensionMismatch(DelayCtrlError):
    """Operands have incompatible dimensions."""


class ApproxNotPositive(DelayCtrlError):
    """The requested commensurable approximation has a nonpositive component."""


class SurrogateSearchExceeded(DelayCtrlError):
    """The surrogate search hit its iteration cap before validating."""


class ClassBeyondHorizon(DelayCtrlError):
    """A class-sum was requested for a class whose time exceeds the horizon."""


class MixedScalarMode(DelayCtrlError):
    """Exact and numeric matrices were mixed in one operation."""


class NotCommensurable(DelayCtrlError):
    """The operation requires a delay vector with commensurable components."""


class NotComparable(DelayCtrlError):
    """The two delay vectors are not ordered by the rational-dependence preorder."""


class TheoremViolation(DelayCtrlError):
    """An internal consistency guarantee failed; indicates a bug or a false
    independence declaration on a delay basis."""


class NotControllableAtT(DelayCtrlError):
    """Control synthesis was requested at a time where the system is not
    relatively controllable."""


class EpsilonTooLarge(DelayCtrlError):
    """The tracking window is too wide even after clamping."""


class RecursionBudgetExceeded(DelayCtrlError):
    """Direct recursive solution evaluation exceeded its state budget."""


class SchemaError(DelayCtrlError):
    """A system file does not match the expected JSON schema."""


class RationalParseError(DelayCtrlError):
    """A scalar entry could not be parsed as an exact rational."""


class AmbiguousBoundary(UserWarning):
    """A class time lies within the time tolerance of a query boundary."""


class EpsilonClamped(UserWarning):
    """The requested tracking window width was clamped below the gap radius."""
