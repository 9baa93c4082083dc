"""Exception types shared across the package."""


class MisslinkError(Exception):
    """Base class for errors raised by this package."""


class ParseError(MisslinkError, ValueError):
    """Malformed input file (carries a line number where possible)."""


class DegenerateSplitError(MisslinkError, ValueError):
    """A missingness split would hide nothing or everything."""


class SamplingError(MisslinkError, RuntimeError):
    """Rejection sampling exhausted its attempt budget."""


class CandidateError(MisslinkError, ValueError):
    """A candidate set cannot be built from the given split."""


class CliqueCapError(MisslinkError, RuntimeError):
    """Clique enumeration exceeded the configured cap."""


class FitError(MisslinkError, RuntimeError):
    """Model fitting failed or was handed a degenerate problem."""
