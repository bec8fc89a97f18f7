"""Exception types shared across the package.

Only conditions that callers branch on get their own class; everything
else raises ValueError / ZeroDivisionError with a descriptive message.
"""


class OAForgeError(Exception):
    """Base class for package-specific errors."""


class NotPrimePowerError(OAForgeError, ValueError):
    """Requested field order is not a prime power."""


class FormatError(OAForgeError, ValueError):
    """Array file cannot be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NotHadamardError(OAForgeError, ValueError):
    """Matrix fails the Hadamard orthogonality invariant."""


class SeedNotVerifiedError(OAForgeError):
    """Seed array failed verification at its claimed strength."""


class LinearityRequiredError(OAForgeError):
    """Non-linear seed of strength >= 3 rejected without force."""


class StrengthLostError(OAForgeError):
    """Generated array failed verification at the seed's strength."""
