"""Exception hierarchy shared by every module of the package."""


class SymShiftError(Exception):
    """Base class for all library errors."""


class AlphabetMismatch(SymShiftError):
    pass


class LengthMismatch(SymShiftError):
    pass


class DigitOverflow(SymShiftError):
    pass


class DigitUnderflow(SymShiftError):
    pass


class ParseError(SymShiftError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class BaseOutOfRange(SymShiftError):
    pass


class UndecidableComparison(SymShiftError):
    pass


class NotInVhat(SymShiftError):
    pass


class DegeneratePeriod(SymShiftError):
    pass


class NotEventuallyPeriodicWithinDepth(SymShiftError):
    """Raised by ``roundtrip_check`` when no period is detected.

    This is a verdict about the input rather than an internal failure.
    """


class NotEventuallyPeriodic(SymShiftError):
    pass


class EmptyEssentialPart(SymShiftError):
    pass


class NotAdmissible(SymShiftError):
    pass


class NotTransitive(SymShiftError):
    pass


class NotIrreducible(SymShiftError):
    pass


class OutOfStarRange(SymShiftError):
    pass


class TooShort(SymShiftError):
    pass


class PrefixTooShort(SymShiftError):
    pass


class NotInU(SymShiftError):
    pass


class NotPeriodic(SymShiftError):
    pass


class BelowGoldenRatio(SymShiftError):
    pass


class NotPrimitive(SymShiftError):
    pass


class BelowTransitiveBase(SymShiftError):
    pass


class ConnectorSearchExhausted(SymShiftError):
    def __init__(self, budget):
        super().__init__(f"connector search exhausted its budget of {budget} transitions")
        self.budget = budget


class NoFundamentalPrefixInRange(SymShiftError):
    pass
