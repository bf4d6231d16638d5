"""Exception types shared across the package."""


class LtrcError(Exception):
    """Base class for all package-specific errors."""


class ParseError(LtrcError, ValueError):
    """A raw input row could not be parsed."""


class ConsistencyError(LtrcError, ValueError):
    """Parsed records contradict the study boundaries or each other."""


class InvalidParameterError(LtrcError, ValueError):
    """A model parameter is outside its domain (e.g. non-positive shape)."""


class DegenerateDataError(LtrcError, ValueError):
    """The data cannot identify the model (no failures from some cause)."""


class ConvergenceError(LtrcError, RuntimeError):
    """All solver paths failed; the message carries the iteration trace."""


class UnstableBootstrapError(LtrcError, RuntimeError):
    """Too many bootstrap replicates failed to produce estimates."""


class FallbackSamplerWarning(UserWarning):
    """The log-concavity certificate failed; grid inversion was used instead."""
