"""Exception hierarchy shared by all kzred modules."""


class KzredError(Exception):
    """Base class for every error raised by this package."""


class NonFinite(KzredError, ValueError):
    pass


class RankDeficient(KzredError, ValueError):
    pass


class DegenerateInput(KzredError, ValueError):
    pass


class BothZero(KzredError, ValueError):
    pass


class NotSquare(KzredError, ValueError):
    pass


class ZeroDiagonal(KzredError, ValueError):
    pass


class RadiusUnderflow(KzredError, ArithmeticError):
    pass


class DimensionTooLarge(KzredError, ValueError):
    pass


class InvalidDelta(KzredError, ValueError):
    pass


class NonPrimitiveVector(KzredError, ValueError):
    pass


class ZeroVector(KzredError, ValueError):
    pass


class NonConvergence(KzredError, RuntimeError):
    pass


class SearchAborted(KzredError, RuntimeError):
    """Enumeration exceeded its node budget."""


class DeadlineExceeded(KzredError, TimeoutError):
    """A cooperative wall-clock deadline passed mid-computation."""


class ConfigInvalid(KzredError, ValueError):
    pass


class BoxTooSmall(UserWarning):
    """The brute-force minimiser sits on the search box boundary."""
