"""Exception types raised across the package."""


class CxOrderError(Exception):
    """Base class for all package errors."""


class OutOfDomain(CxOrderError, ValueError):
    pass


class DegreeOverflow(CxOrderError, ValueError):
    pass


class JumpDifferentiation(CxOrderError, ValueError):
    """Raised when differentiating a function that has a jump."""


class SupportMismatch(CxOrderError, ValueError):
    pass


class ZeroScale(CxOrderError, ValueError):
    pass


class OrderOverflow(CxOrderError, ValueError):
    pass


class UnknownRule(CxOrderError, KeyError):
    pass


class ParseError(CxOrderError, ValueError):
    """Malformed measure-spec input."""
