"""Exception and warning types shared across the package."""


class InfospreadError(Exception):
    """Base class for all package-specific errors."""


class CorpusLoadError(InfospreadError):
    """Input file unreadable, or so malformed it is probably the wrong file."""


class NoDataError(InfospreadError):
    """An operation that needs at least one record received none."""


class DegenerateCurveError(InfospreadError):
    """Curve carries no growth signal (all-zero or constant values)."""


class CurveDivergedError(InfospreadError):
    """Model evaluation overflowed; the parameters are unreasonable."""


class SubcriticalError(InfospreadError):
    """No herd threshold exists because the infection rate is zero."""


class UnstableBootstrapError(InfospreadError):
    """Too many bootstrap replicate fits failed to converge."""


class ZeroVarianceError(InfospreadError):
    """All embedding vectors coincide; silhouette analysis is undefined."""


class UntopicableError(InfospreadError):
    """Content has no in-vocabulary token, so no topic distribution exists."""


class ConfigError(InfospreadError):
    """A run configuration is invalid or references missing files."""


class UnrealisticR0Warning(UserWarning):
    """Fitted basic reproduction number is far beyond real-world epidemics."""


class IdentifiabilityWarning(UserWarning):
    """A fitted parameter sits at or near its search bound; only ratios are trustworthy."""
