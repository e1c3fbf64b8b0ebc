"""Exception types shared across the package."""


class AffineOrbitError(Exception):
    """Base class for every error raised by this package."""


class DivisionByZero(AffineOrbitError, ZeroDivisionError):
    pass


class SqrtNotRepresentable(AffineOrbitError, ValueError):
    """The exact backend has no square root for this value."""


class OddValuation(AffineOrbitError, ValueError):
    """A series with odd order has no square root in the Laurent field."""


class PrecisionExhausted(AffineOrbitError, ArithmeticError):
    """Truncation left too few known terms to decide the question asked."""


class DimensionMismatch(AffineOrbitError, ValueError):
    pass


class NotMonomial(AffineOrbitError, ValueError):
    pass


class NotSymmetric(AffineOrbitError, ValueError):
    pass


class NotSkew(AffineOrbitError, ValueError):
    pass


class NotInvertible(AffineOrbitError, ValueError):
    pass


class DetNotSquare(AffineOrbitError, ValueError):
    pass


class DetNotOne(AffineOrbitError, ValueError):
    pass


class NotESymAPM(AffineOrbitError, ValueError):
    pass


class NotAffineTwistedInvolution(AffineOrbitError, ValueError):
    pass


class HasFixedPoint(AffineOrbitError, ValueError):
    pass


class NotFpfInvolution(AffineOrbitError, ValueError):
    pass
