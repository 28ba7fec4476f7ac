"""Exception types shared across the service."""


class ValidationError(ValueError):
    """Input violates a domain invariant (bad value, bad range, bad format).

    ``fields`` optionally maps field names to per-field messages so API
    handlers can return them to the submitter.
    """

    def __init__(self, message, fields=None):
        super().__init__(message)
        self.fields = dict(fields) if fields else {}


class NotFoundError(LookupError):
    """A referenced entity (sensor, report, ...) does not exist."""


class ParseError(ValueError):
    """An upstream payload could not be mapped to a normalized reading."""

    def __init__(self, message, sensor_id=None):
        super().__init__(message)
        self.sensor_id = sensor_id


class JournalCorruptError(RuntimeError):
    """A journal file is damaged somewhere other than its trailing line."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no
