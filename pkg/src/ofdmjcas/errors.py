"""Exception types raised across the package."""


class JcasError(Exception):
    """Base class for all errors raised by ofdmjcas."""


class ConfigurationError(JcasError, ValueError):
    """Invalid system parameters or configuration file content.

    ``field`` names the offending parameter when known, ``line`` the
    config-file line number.
    """

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if field is not None:
            prefix += f"{field}: "
        super().__init__(prefix + message)


class DomainError(JcasError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class TargetPassedAntennaError(DomainError):
    """Propagated range reached zero or became negative."""


class PredictionInfeasibleError(DomainError):
    """A hypothesis predicts a non-positive range at the requested time."""


class NoTargetError(JcasError):
    """A frame contains no detectable target."""


class NoValidEstimateError(JcasError):
    """Every member of a candidate pair is kinematically infeasible."""


class UnsupportedSizeError(JcasError, ValueError):
    """Transform size not supported by the requested algorithm."""
