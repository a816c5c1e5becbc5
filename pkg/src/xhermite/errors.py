"""Exception hierarchy."""


class XHermiteError(Exception):
    """Base class for library errors."""


class ArityMismatch(XHermiteError, ValueError):
    pass


class IrrationalScaleMismatch(XHermiteError, ValueError):
    """Adding terms whose (2*pi) powers differ cannot stay exact."""


class NonSquare(XHermiteError, ValueError):
    pass


class MissingVariable(XHermiteError, ValueError):
    pass


class InvalidSequence(XHermiteError, ValueError):
    """Level sequence is not strictly increasing nonnegative integers."""


class NotKreinAdler(XHermiteError, ValueError):
    pass


class SingularTime(XHermiteError, ValueError):
    """|sin t| too small for the closed-form kernel."""


class WronskianZero(XHermiteError, ZeroDivisionError):
    pass


class NearPole(XHermiteError, ValueError):
    pass


class TruncationTooSmall(XHermiteError, ValueError):
    pass


class LambdaTooLarge(XHermiteError, ValueError):
    pass
