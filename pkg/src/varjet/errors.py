class VarjetError(Exception):
    """Base class for errors raised by varjet."""


class NumericalFailure(VarjetError):
    """An integration could not be completed at the requested accuracy."""


class StepUnderflow(NumericalFailure):
    """Adaptive step fell below the configured minimum (singularity nearby or tolerance too tight)."""


class SingularityTooClose(NumericalFailure):
    """A path passes closer than the clearance radius to a known singularity."""


class WronskianDrift(NumericalFailure):
    """A monitored Wronskian left 1 by more than the allowed drift."""


class NoObstruction(VarjetError):
    """No jet-row entry survived the cap."""


class PoleInFamily(VarjetError, ValueError):
    """Parameter family evaluated at a pole of its denominator."""


class DegenerateDarboux(VarjetError, ValueError):
    """``lambda * Lambda == m**4``: the middle Darboux family does not exist."""


class PathError(VarjetError, ValueError):
    """Malformed path or path operation (e.g. concatenation endpoint mismatch)."""
