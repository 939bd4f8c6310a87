"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Malformed input or violated precondition (CLI exit code 2)."""


class CapError(ValidationError):
    """Requested degree/weight window exceeds the stored truncation."""


class ParityDomainError(ValidationError):
    """Operation applied outside its parity domain."""


class AlphabetError(ValidationError):
    """Mixed generator alphabets or grading conventions."""


class CrossCheckError(RuntimeError):
    """Two independent computation paths disagree (CLI exit code 3)."""
