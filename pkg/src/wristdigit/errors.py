"""Exception types shared across the toolkit.

Everything raised for bad *data* (as opposed to bad arguments, which get
plain ValueError) derives from ToolkitError so the CLI can map the whole
family to a single exit code.
"""


class ToolkitError(Exception):
    """Base class for data and format errors raised by this package."""


class TraceFormatError(ToolkitError):
    """A trace CSV row or header that does not conform to the schema."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class SequencingError(ToolkitError):
    """Timestamps went backwards (or stalled) where they must increase."""


class LabelError(ToolkitError):
    """A label is missing, inconsistent within a run, or out of range."""


class ModelFormatError(ToolkitError):
    """A serialized model that cannot be loaded; carries a position hint."""

    def __init__(self, message: str, position: str | int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)


class StreamOverflowError(ToolkitError):
    """An engaged segment exceeded the segmenter's sample buffer bound."""


class GridSearchError(ToolkitError):
    """A grid combination failed to train; names the offending config."""

    def __init__(self, config, cause: Exception):
        self.config = config
        self.__cause__ = cause
        super().__init__(f"config {config} failed: {cause}")


class CompatibilityError(ToolkitError):
    """Model and data disagree about the feature layout."""
