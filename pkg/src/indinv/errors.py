"""Exception types shared across the package."""


class IndinvError(Exception):
    """Base class for all tool errors."""


class DimensionMismatch(IndinvError):
    """Operands have incompatible dimensions."""


class NoSplittableDimension(IndinvError):
    """Every dimension of the box is at or below the minimum split width."""


class ParseError(IndinvError):
    """Malformed model or config document."""


class ShapeError(IndinvError):
    """Network layer dimensions do not chain."""


class UnsupportedActivation(IndinvError):
    """Activation outside the supported set (relu, identity)."""


class ConfigError(IndinvError):
    """System configuration is inconsistent or incomplete."""
