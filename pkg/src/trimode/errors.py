"""Exception hierarchy for the trimode package.

Every error raised by the library derives from :class:`TrimodeError` so that
callers (in particular the CLI) can distinguish physics/numerics failures from
configuration and I/O failures.
"""


class TrimodeError(Exception):
    """Base class for all trimode errors."""


class ConfigError(TrimodeError):
    """Invalid or inconsistent configuration input."""


# --- gaussian ---------------------------------------------------------------

class NonPairedSpectrum(TrimodeError):
    """Eigenvalues of Omega @ V fail to form +-i*nu pairs within tolerance."""


class IndexOutOfRange(TrimodeError):
    """A mode index is outside the valid range for the covariance matrix."""


class UnphysicalState(TrimodeError):
    """Covariance matrix violates the uncertainty principle (nu < 1/2)."""


class DimensionMismatch(TrimodeError):
    """Operands have incompatible dimensions (e.g. fidelity needs 1 mode)."""


# --- model ------------------------------------------------------------------

class ZeroTemperature(TrimodeError):
    """Decoherence time is undefined at zero thermal occupation."""


class NoPositiveRoot(TrimodeError):
    """The mean-field cubic has no positive real root (cannot occur for
    nonzero drive; raised as a sanity check)."""


class GaugeViolation(TrimodeError):
    """Mean-field amplitude a_F has a nonzero imaginary part where the
    real-gauge form is required."""


# --- dynamics ---------------------------------------------------------------

class InconsistentVerdicts(TrimodeError):
    """Spectral and Routh-Hurwitz stability tests disagree beyond the
    marginal-stability band (signals ill-conditioning)."""


class UnstableSystem(TrimodeError):
    """Drift matrix is not strictly stable; no steady state exists."""


class SingularSystem(TrimodeError):
    """The vectorized Lyapunov operator is numerically singular."""


# --- inference --------------------------------------------------------------

class SingularDrift(TrimodeError):
    """Drift matrix is numerically singular; the (A*tau)^-1 prefactor of the
    inferred covariance is invalid."""


class UnphysicalReduction(TrimodeError):
    """A single-mode reduction of an inferred covariance matrix violates the
    uncertainty bound by more than the clamping tolerance."""


class LengthMismatch(TrimodeError):
    """Time series operands have different lengths."""
