"""Exception hierarchy.

Two families matter to callers: ``ValidationError`` (bad input, CLI exit 2)
and ``PhysicalRegimeError`` (valid input that leads outside the physical or
numerically meaningful regime, CLI exit 3).
"""


class WeakConcError(Exception):
    """Base class for all package errors."""


class ValidationError(WeakConcError, ValueError):
    pass


class PhysicalRegimeError(WeakConcError):
    pass


class CutoffTooSmall(ValidationError):
    """Truncated probability mass exceeds the cutoff's ``tail_tol``."""


class UnphysicalSqueezing(ValidationError):
    """Two-mode squeezing parameter outside ``0 <= lambda < 1``."""


class NonPositiveCoupling(ValidationError):
    """Success predicate requested for ``kappa_T <= 0``."""


class UnsupportedScheme(ValidationError):
    """No closed form exists for the requested ancilla scheme."""


class NotNormalized(ValidationError):
    pass


class NearOrthogonalPostSelection(PhysicalRegimeError):
    """Pre/post overlap too small for a meaningful weak value."""


class VanishingPostSelection(PhysicalRegimeError):
    """Post-selection event has (numerically) zero probability."""


class UnphysicalOutput(PhysicalRegimeError):
    """Predicted output TMSV would not be normalisable."""
