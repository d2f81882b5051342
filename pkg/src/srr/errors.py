class SrrError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSystemError(SrrError, ValueError):
    pass


class InvalidParameterError(SrrError, ValueError):
    pass


class DimensionError(SrrError, ValueError):
    pass


class NotInRegionError(SrrError):
    """The given demand lies outside the service rate region."""


class OutOfDomainError(SrrError, ValueError):
    """Arguments fall outside the domain a formula is defined on."""


class UnsupportedParametersError(SrrError):
    """A closed form or heuristic was asked to work outside its hypotheses."""


class UnsupportedFormatError(SrrError, ValueError):
    pass
