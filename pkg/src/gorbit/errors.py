"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`GorbitError`
so callers (and the CLI) can catch domain failures without swallowing bugs.
"""


class GorbitError(Exception):
    """Base class for all package errors."""


class UnsupportedFamily(GorbitError, ValueError):
    pass


class RankTooSmall(GorbitError, ValueError):
    pass


class DimMismatch(GorbitError, ValueError):
    pass


class RankDeficient(GorbitError, ValueError):
    pass


class AlgebraMismatch(GorbitError, ValueError):
    pass


class NonIntegerResult(GorbitError, ArithmeticError):
    """The Weyl product came out fractional, which means a root-system bug."""


class NotSkewSymmetric(GorbitError, ValueError):
    pass


class NotInTarget(GorbitError, ValueError):
    """A representation's operators do not lie in the requested target algebra."""


class NonConstantRatio(GorbitError, ValueError):
    pass


class CoupledOnPairSpace(GorbitError, ValueError):
    pass


class CoupledSpec(GorbitError, ValueError):
    pass


class InvalidMetric(GorbitError, ValueError):
    pass


class NotCertifiedGO(GorbitError, RuntimeError):
    pass


class RepNotConstructible(GorbitError, LookupError):
    pass


class UnknownCase(GorbitError, KeyError):
    pass


class SpecError(GorbitError, ValueError):
    """Malformed space / rep-tree / grid description."""
