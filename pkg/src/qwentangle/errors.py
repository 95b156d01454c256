"""Exceptions raised by the walk, topology and entanglement routines."""


class QWalkError(Exception):
    """Base class for all library errors."""


class BoundaryOverrun(QWalkError):
    """Nonzero amplitude would reach the edge of the truncated lattice."""


class NegligibleOverlap(QWalkError):
    """A projection has (numerically) zero detection probability."""


class SamePosition(QWalkError):
    """Polarization representation requested for two particles on one site."""


class NoSeparation(QWalkError):
    """No anti-diagonal probability with strictly separated particles."""


class GaplessSpectrum(QWalkError):
    """A winding number was requested for a gapless walk."""


class AsymptoticGapless(QWalkError):
    """One of the asymptotic phases of a coin profile is gapless."""


class ConfigError(QWalkError, ValueError):
    """Invalid experiment configuration."""
