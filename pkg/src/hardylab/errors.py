"""Exception types shared across the package."""


class HardyLabError(Exception):
    """Base class for all package-specific errors."""


class SchemaError(HardyLabError):
    """A descriptor or family file failed validation.

    Carries a dotted field path so CLI users can locate the offender.
    """

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class BasisClosureError(HardyLabError):
    """An exact operation needed a product of constants that was not declared."""


class PrecisionExhaustedError(HardyLabError):
    """The requested certification could not be reached within the precision cap."""


class UncertifiableRoundingError(PrecisionExhaustedError):
    """A value sits (provably or plausibly) exactly on a rounding boundary."""


class PreconditionError(HardyLabError):
    """An operation was invoked outside its stated domain."""


class NoCompatibleWeightError(HardyLabError):
    """The weight ladder was exhausted without a compatible entry."""
