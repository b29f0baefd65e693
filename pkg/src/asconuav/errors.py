"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument is outside the range an operation accepts."""


class AuthenticationError(Exception):
    """Tag verification failed; no plaintext is released."""

    def __init__(self, message="authentication failed"):
        super().__init__(message)


class DatasetError(ValueError):
    """A dataset or KAT file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SessionError(RuntimeError):
    """A link session cannot continue (e.g. sequence space exhausted)."""


class ReplayError(Exception):
    """A frame's sequence number was already accepted or fell out of the window."""


class FrameError(ValueError):
    """Bytes on the wire do not form a well-formed frame for this session."""
