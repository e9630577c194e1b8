"""Exception hierarchy for cyclewalk.

Configuration problems derive from :class:`ConfigError` (a ``ValueError``),
numerical trouble from :class:`NumericError`. The CLI maps these two
families onto distinct exit codes.
"""


class WalkError(Exception):
    """Base class for all cyclewalk errors."""


class ConfigError(WalkError, ValueError):
    """Invalid walk configuration or input."""


class DimensionTooSmall(ConfigError):
    pass


class NonUnitaryCoin(ConfigError):
    pass


class MemoryRequired(ConfigError):
    pass


class ModeMismatch(ConfigError):
    """Operation requires the other walk mode (memory vs. memoryless)."""


class NodeOutOfRange(ConfigError):
    pass


class ModeOutOfRange(ConfigError):
    pass


class LengthMismatch(ConfigError):
    pass


class ZeroVector(ConfigError):
    pass


class DimensionMismatch(ConfigError):
    pass


class NumericError(WalkError, ArithmeticError):
    """A numerical routine produced an inconsistent result."""


class EigensolverFailure(NumericError):
    pass


class NonConvergentResidue(NumericError):
    """Imaginary part of a limiting probability exceeded tolerance."""
