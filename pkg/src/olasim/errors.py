"""Exception types shared across the package."""


class OlasimError(Exception):
    """Base class for package errors."""


class ConfigurationError(OlasimError):
    """Raised for invalid configuration: bad keys, dimension mismatches,
    out-of-range values, unsupported combinations."""


class SamplingExhaustedError(OlasimError):
    """Raised when rejection sampling hits its draw cap before collecting
    the requested number of accepted points."""


class InvariantViolationError(OlasimError):
    """Raised when an internal invariant is broken, e.g. an empty version
    space after elimination."""
