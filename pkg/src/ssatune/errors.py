"""Exception hierarchy shared by every module."""


class SsaTuneError(Exception):
    """Base class for all package errors."""


class MalformedInputError(SsaTuneError, ValueError):
    """Problem data violates a structural invariant (self-loop, duplicate edge...)."""


class DimensionError(SsaTuneError, ValueError):
    pass


class DegenerateInstanceError(SsaTuneError, ValueError):
    """Instance is too small or too trivial for hyperparameter determination."""


class ConfigurationError(SsaTuneError, ValueError):
    pass


class GsetParseError(MalformedInputError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)
