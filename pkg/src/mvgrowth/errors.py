"""Exception types raised by mvgrowth."""


class GrowthChartError(Exception):
    """Base class for all input errors raised by this package."""


class DimensionError(GrowthChartError, ValueError):
    """Points or samples have incompatible dimensions."""


class ConfigError(GrowthChartError, ValueError):
    """An argument or generator setting is out of range."""


class AlignmentError(GrowthChartError, KeyError):
    """A trajectory time has no matching reference population."""

    def __str__(self) -> str:
        # KeyError quotes its message; we want it verbatim.
        return str(self.args[0]) if self.args else ""


class FormatError(GrowthChartError, ValueError):
    """Malformed CSV input."""
