"""Exception hierarchy.

Everything raised on purpose by the package derives from
:class:`SymtangleError`.  Input problems additionally derive from
``ValueError`` so callers can treat them the usual way; features that are
deliberately not available derive from ``NotImplementedError``.
"""


class SymtangleError(Exception):
    """Base class for all package errors."""


class InputError(SymtangleError, ValueError):
    """Invalid argument (wrong range, shape, or type of state)."""


class Unsupported(SymtangleError, NotImplementedError):
    """The requested family/operation combination is not available."""


class DimensionMismatch(InputError):
    pass


class NotHermitian(InputError):
    pass


class DomainError(InputError):
    pass


class NotAState(InputError):
    pass


class InvalidDistribution(InputError):
    pass


class UnsortedGrid(InputError):
    pass


class OutsideStateSpace(InputError):
    pass


class FlipExpectationOutOfRange(InputError):
    pass


class GroupMismatch(InputError):
    pass


class Infeasible(SymtangleError):
    """No pure state reaches the requested invariant coordinates."""


class UnsupportedRegion(Unsupported):
    pass


class NonAbelianUnsupported(Unsupported):
    pass
