# =============================================================================
# File: src/errors.py
# =============================================================================


class WordsatError(Exception):
    """Base class for every error raised by the solver stack"""


class ContractError(WordsatError, ValueError):
    """A precondition or invariant of an operation was violated"""


class ParseError(WordsatError, ValueError):
    """Malformed text input"""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ResourceLimitError(WordsatError):
    """A configured cap or budget was exceeded"""

    def __init__(self, message, stage=None):
        if stage is not None:
            message = f"[{stage}] {message}"
        super().__init__(message)
        self.stage = stage


class CertificateError(WordsatError):
    """A constructed arc failed verification"""

    def __init__(self, message, step=None):
        if step is not None:
            message = f"{step}: {message}"
        super().__init__(message)
        self.step = step
