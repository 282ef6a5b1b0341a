"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside a model's domain (e.g. a non-positive distance)."""


class InsufficientDataError(ValueError):
    """Not enough (or not informative enough) data to compute a result."""


class FitError(RuntimeError):
    """A step of the fitting pipeline failed.

    ``step`` names the failing stage so callers can report it.
    """

    def __init__(self, step: str, message: str):
        super().__init__(f"{step}: {message}")
        self.step = step


class CaptureFormatError(ValueError):
    """One or more rows of a capture file failed validation."""

    def __init__(self, errors):
        self.errors = list(errors)
        lines = [f"row {e.row}: {e.field}: {e.message}" for e in self.errors[:20]]
        if len(self.errors) > 20:
            lines.append(f"... and {len(self.errors) - 20} more")
        super().__init__("invalid capture rows:\n  " + "\n  ".join(lines))


class UnknownLocationError(KeyError):
    def __init__(self, ids):
        self.ids = sorted(ids)
        super().__init__(f"unknown location id(s): {', '.join(self.ids)}")

    def __str__(self):
        return self.args[0]


class OutOfRangeError(ValueError):
    """RSSI outside the tiled range of the MCS table."""


class NoDataError(LookupError):
    """A table query found no data in the cell nor in its neighbours."""
