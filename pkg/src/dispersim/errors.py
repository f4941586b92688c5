"""Exception types shared across the library."""


class DispersionError(Exception):
    """Base class for physics- and numerics-level failures."""


class UnsupportedMaterialError(DispersionError):
    """Response function requested for an ideal-limit marker material."""


class DegeneratePointError(DispersionError):
    """Kernel evaluated at the degenerate point xi = q = 0."""


class InvalidStackError(DispersionError):
    """Layer stack violates its structural constraints."""


class UnphysicalParameterError(DispersionError):
    """A quantity left its physically admissible range (e.g. D_sigma <= 0)."""


class CoincidenceError(DispersionError):
    """Two-point kernel evaluated at coinciding positions."""


class MixedRegimeError(DispersionError):
    """Power-law window straddles a sign change of the potential."""


class ConvergenceError(DispersionError):
    """Numerical procedure failed to reach the requested tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class IterationError(ConvergenceError):
    """Fixed-point iteration did not converge; carries the last residual."""

    def __init__(self, message, residual, diagnostics=None):
        super().__init__(message, diagnostics)
        self.residual = residual


class RegimeWarning(UserWarning):
    """Asymptotic formula evaluated outside its validity window."""
