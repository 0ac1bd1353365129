"""Exception types shared across the package."""


class LabError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameter(LabError):
    """A constructor or operation parameter is out of range."""


class NonUnitDeterminant(LabError):
    """A coefficient matrix does not have determinant one."""


class NotPositiveDefinite(LabError):
    """A matrix expected to be positive definite is not."""


class DilatationOutOfRange(LabError):
    """A complex dilatation has modulus >= 1."""


class DomainMismatch(LabError):
    """Sampled image points of the first map leave the second map's domain."""


class NonIntegrableWeight(LabError):
    """Quadrature of a weight (or a norm of it) diverged."""


class DegenerateTriangle(LabError):
    """A triangle has non-positive or vanishing signed area."""


class NonpositiveWeight(LabError):
    """A weight is not strictly positive at a quadrature point."""


class ZeroMassVector(LabError):
    """Rayleigh quotient denominator vanished while the numerator did not."""


class NoConvergence(LabError):
    """Eigensolver iteration budget exhausted before reaching tolerance."""


class BadShift(LabError):
    """Shifted operator could not be factorized even after the retry."""


class ModeOutOfRange(LabError):
    """Requested eigenvalue index exceeds the computed spectrum."""


class ParseError(LabError):
    """Scenario file is syntactically invalid or contains unknown keys."""


class ValidationError(LabError):
    """Scenario file is well-formed but a value is out of range."""
