"""Shared exception types."""


class SpecMismatchError(ValueError):
    """Operands belong to different group specifications."""


class SizeGuardError(RuntimeError):
    """A computation was rejected because it would exceed a size guard."""


class NotInGaugeGroupError(ValueError):
    """A configuration with non-trivial total charge was used where a
    gauge-group element (trivial total charge) is required."""


class ConfigError(ValueError):
    """A run configuration failed validation."""
