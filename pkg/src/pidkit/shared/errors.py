"""Exception hierarchy for pidkit."""

from pathlib import Path

EXIT_OK = 0
EXIT_MALFORMED = 2
EXIT_SEMANTIC = 3


class PidkitError(Exception):
    """Base class for all toolkit errors."""


class GeometryError(PidkitError, ValueError):
    """Invalid geometric input (stride, rectangle bounds, polygon, mask)."""


class MaskFormatError(GeometryError):
    """Malformed mask raster or run-length payload."""


class MetricError(PidkitError, ValueError):
    """Metric is undefined for the given input."""


class ArchSpecError(PidkitError, ValueError):
    """Inconsistent architecture description."""


class ReportFormatError(PidkitError, ValueError):
    """Unknown report serialization format."""


class DatasetError(PidkitError):
    """A dataset file problem, optionally positioned at a line."""

    exit_code = EXIT_MALFORMED

    def __init__(self, message: str, path: Path | str | None = None, line: int | None = None):
        self.message = message
        self.path = Path(path) if path is not None else None
        self.line = line
        super().__init__(self._render())

    def _render(self) -> str:
        if self.path is None:
            return self.message
        if self.line is None:
            return f"{self.path}: {self.message}"
        return f"{self.path}:{self.line}: {self.message}"


class DatasetFormatError(DatasetError):
    """Malformed record (not JSON, missing keys, wrong field types)."""

    exit_code = EXIT_MALFORMED


class DatasetSemanticError(DatasetError):
    """Well-formed record that violates a dataset rule."""

    exit_code = EXIT_SEMANTIC
