"""Exception hierarchy shared across the package."""


class FFCertError(Exception):
    """Base class for all domain errors raised by this package."""


class BudgetExceeded(FFCertError):
    """A requested object would exceed the configured dimension budget."""


class SupportMismatch(FFCertError):
    """A local term references sites unknown to its site system."""


class DimensionMismatch(FFCertError):
    """Operands live on incompatible Hilbert spaces."""


class ConvergenceFailure(FFCertError):
    """The eigensolver could not resolve the requested spectral data."""


class InvalidParameter(FFCertError):
    """A numeric parameter is outside its admissible range."""


class NonUnitaryGate(FFCertError):
    """A circuit gate matrix is not unitary within tolerance."""


class ProbabilityLeak(FFCertError):
    """Measurement probabilities do not sum to one within tolerance."""


class MissingTerm(FFCertError):
    """An energy estimate was requested for a term with no measurement records."""


class DegenerateGround(FFCertError):
    """An operation requires a unique ground state but the ground space is degenerate."""


class ResolutionTooCoarse(FFCertError):
    """The phase-estimation register cannot separate the ground state from the gap."""


class RetryCapExceeded(FFCertError):
    """The projective-measurement retry cap was exhausted without a success."""
