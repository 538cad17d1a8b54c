from typing import Any, Optional


class AnucaException(Exception):
    """ Base class of every error raised by anuca."""
    pass


class ConfigurationException(AnucaException, ValueError):
    pass


class DimensionMismatchException(AnucaException, ValueError):
    pass


class CoordinateOverflowException(AnucaException, OverflowError):
    pass


class InvalidRuleException(AnucaException, ValueError):
    pass


class SupportMismatchException(AnucaException, ValueError):
    pass


class PatternFormatException(AnucaException, ValueError):
    pass


class EmptyBoxException(AnucaException, ValueError):
    pass


class UnsupportedVariantException(AnucaException, TypeError):
    pass


class SequenceConstraintException(AnucaException, ValueError):
    pass


class UnknownExampleException(AnucaException, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class CapExceededException(AnucaException):
    """
    Raised when an exhaustive computation would exceed its cap.
    `partial` holds whatever the caller had established before giving up
    (e.g. the radii already scanned), so reports can still show it.
    """

    def __init__(self, what: str, required: int, cap: int, partial: Optional[Any] = None):
        self.what = what
        self.required = required
        self.cap = cap
        self.partial = partial
        super().__init__(f"{what}: {required} exceeds cap {cap}")


class RuleFileSchemaException(AnucaException, ValueError):
    def __init__(self, message: str, path: Optional[str] = None, field: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.field = field
        self.line = line
        location = []
        if path:
            location.append(str(path))
        if line is not None:
            location.append(f"line {line}")
        if field:
            location.append(f"field '{field}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class InverseVerificationException(AnucaException, RuntimeError):
    """ A synthesized inverse failed its own replay: this is a bug, not a verdict."""
    pass
