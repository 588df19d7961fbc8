"""Exception types shared by all modules."""


class ToeplitzError(Exception):
    """Base class for every error raised by this package."""


class AssumptionViolated(ToeplitzError):
    def __init__(self, names):
        self.names = list(names)
        super().__init__("violated assumptions: " + ", ".join(self.names))


class NoAnchor(ToeplitzError):
    pass


class InsufficientFill(ToeplitzError):
    pass


class RangeTooLarge(ToeplitzError):
    pass


class DepthCapExceeded(ToeplitzError):
    pass


class NoHoles(ToeplitzError):
    pass


class Unstable(ToeplitzError):
    pass


class PhaseMismatch(ToeplitzError):
    pass


class NoAlignment(ToeplitzError):
    """No shift of the skeleton is compatible with the window."""


class WindowTooShort(ToeplitzError):
    def __init__(self, required, message=None):
        self.required = required
        if message is None:
            message = ("window too short" if required is None
                       else f"window too short, need length >= {required}")
        super().__init__(message)


class NotVerified(ToeplitzError):
    pass


class Inconsistent(ToeplitzError):
    pass


class UnknownWord(ToeplitzError):
    def __init__(self, word):
        self.word = word
        super().__init__(f"word {word!r} is not in the rule table")


class ClosureFailure(ToeplitzError):
    def __init__(self, witness, image):
        self.witness = witness
        self.image = image
        super().__init__(f"{witness!r} maps to {image!r}, which is not a factor")


class NotFound(ToeplitzError):
    pass


class WindowArithmetic(ToeplitzError):
    pass


class RoundTripFailure(ToeplitzError):
    pass


class NotInGroup(ToeplitzError):
    def __init__(self, message, trace=()):
        self.trace = list(trace)
        super().__init__(message)


class IterationCap(ToeplitzError):
    pass


class BudgetExceeded(ToeplitzError):
    pass


class NotMember(ToeplitzError):
    pass


class MissingEntry(ToeplitzError):
    def __init__(self, k):
        self.k = k
        super().__init__(f"profile has no entry for k={k}")


class ClassificationError(ToeplitzError):
    pass
