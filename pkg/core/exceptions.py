class StirlingError(Exception):
    """Base class for errors raised by the core library."""


class DomainError(StirlingError, ValueError):
    """Argument outside the domain of an operation (cut, strip, support, range)."""


class BranchCutError(DomainError):
    """Argument lies on the cut (-inf, -1/e] of the principal Lambert W branch."""

    def __init__(self, x):
        super().__init__(
            f"{x} lies on the branch cut (-inf, -1/e]; use w0_boundary(x, side) for one-sided values"
        )
        self.x = x


class PrecisionError(StirlingError):
    """Working precision exhausted."""

    def __init__(self, message, bits=None):
        advice = 'raise STIRLING_PRECISION_BITS or pass --precision'
        if bits is not None:
            advice = f"{advice} (currently {bits} bits)"
        super().__init__(f"{message}; {advice}")
        self.bits = bits


class IntegrityError(StirlingError):
    """A result failed its own consistency check (root count, sign, Vieta)."""


class ConvergenceError(StirlingError):
    """An iteration did not reach its tolerance."""
