"""Exception types shared across the package."""


class HypertraceError(Exception):
    pass


class SingularMatrixError(HypertraceError, ZeroDivisionError):
    pass


class ResourceError(HypertraceError):
    """An enumeration would exceed its configured budget."""


class UnsupportedShapeError(HypertraceError, ValueError):
    pass


class ConsistencyError(HypertraceError, ArithmeticError):
    """A computed quantity violates an identity it must satisfy."""
