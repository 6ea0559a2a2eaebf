"""Exception hierarchy and warning categories used across the package."""


class QbmError(Exception):
    """Base class for all package errors."""


# ---------------------------------------------------------------------------
# input / parameter errors
# ---------------------------------------------------------------------------

class DegenerateQ(QbmError):
    """Momentum transfer magnitude is zero where a 1/q prefactor appears."""


class FugacityOutOfRange(QbmError):
    """Fugacity outside the admissible range for the requested statistics."""


class IndeterminatePoint(QbmError):
    """Structure-factor prefactor denominator vanished and could not be
    regularized.  The series evaluation removes the singularity in practice,
    so this is only raised on non-finite intermediate values."""


class GridTooNarrow(QbmError):
    """Momentum grid does not contain the thermal state to the required
    boundary weight."""


class GridMismatch(QbmError):
    """Momentum transfer is not commensurate with the momentum grid."""


# ---------------------------------------------------------------------------
# numerical failures
# ---------------------------------------------------------------------------

class QbmNumericalError(QbmError):
    """Base class for runtime numerical failures (exit code 2 in the CLI)."""


class QuadratureNonConvergent(QbmNumericalError):
    """Adaptive quadrature exceeded its subdivision budget."""


class TabulatedRangeTooShort(QbmNumericalError):
    """Tabulated T-matrix ends before the thermal weight has decayed."""


class StepUnstable(QbmNumericalError):
    """Time stepper lost trace or Hermiticity beyond 10x tolerance."""


class CFLViolation(QbmNumericalError):
    """Phase-space solver time step violates a stability condition."""


# ---------------------------------------------------------------------------
# configuration errors
# ---------------------------------------------------------------------------

class ConfigError(QbmError):
    """Aggregate of all configuration problems found in one pass.

    ``errors`` holds the individual ParseError / ValidationError instances;
    the message lists every one of them, not just the first.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


class ParseError(QbmError):
    """Malformed configuration line.  Carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class ValidationError(QbmError):
    """Well-formed but invalid configuration value.  Names the field."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


# ---------------------------------------------------------------------------
# warnings
# ---------------------------------------------------------------------------

class ExtrapolationBeyondTable(UserWarning):
    """A tabulated T-matrix was queried beyond its last sample; the value was
    clamped to zero."""
