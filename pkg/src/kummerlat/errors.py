"""Exception types raised across the package."""


class KummerLatError(Exception):
    """Base class for all package errors."""


class DegenerateForm(KummerLatError):
    pass


class IncompatibleGlue(KummerLatError):
    pass


class NotIsomorphism(KummerLatError):
    pass


class NotDefinite(KummerLatError):
    pass


class CapExceeded(KummerLatError):
    """Enumeration stopped at the safety cap; ``partial`` holds what was found."""

    def __init__(self, message, partial=()):
        super().__init__(message)
        self.partial = list(partial)
        self.count = len(self.partial)


class NotPositivePlane(KummerLatError):
    pass


class NotRational(KummerLatError):
    pass


class NonPositiveOmega(KummerLatError):
    pass


class NotRationalBField(KummerLatError):
    pass


class ConstructionInvariantViolated(KummerLatError):
    def __init__(self, invariant, detail=""):
        super().__init__(f"{invariant}: {detail}" if detail else invariant)
        self.invariant = invariant


class DimensionMismatch(KummerLatError):
    pass


class DegeneratePath(KummerLatError):
    pass


class PathHitsWall(KummerLatError):
    pass


class SchemaError(KummerLatError):
    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class DigestMismatch(KummerLatError):
    pass


class NotSymmetric(KummerLatError, ValueError):
    def __init__(self, cell):
        super().__init__(f"Gram matrix not symmetric at {cell}")
        self.cell = cell
