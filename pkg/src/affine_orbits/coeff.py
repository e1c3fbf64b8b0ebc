"""Coefficient fields: exact Gaussian rationals and approximate complex floats.

A *field* object bundles the operations the series layer needs (coercion,
zero test, inverse, square root, JSON codec).  Elements of the exact field
are :class:`GaussianRational`; elements of the approximate field are plain
Python ``complex`` numbers.
"""

from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction
from numbers import Rational

from .errors import DivisionByZero, SqrtNotRepresentable

DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAGNITUDE_CAP = 3e4


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as a rational number")


def _rational_sqrt(q: Fraction) -> Fraction | None:
    """Square root of a non-negative rational, or None if irrational."""
    if q < 0:
        return None
    p, d = q.numerator, q.denominator
    rp, rd = math.isqrt(p), math.isqrt(d)
    if rp * rp == p and rd * rd == d:
        return Fraction(rp, rd)
    return None


class GaussianRational:
    """An element ``re + im*i`` of Q(i) with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        z = object.__new__(cls)
        z.re = re
        z.im = im
        return z

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Rational)):
            return GaussianRational._make(Fraction(other), Fraction(0))
        if isinstance(other, complex):
            return GaussianRational(Fraction(other.real), Fraction(other.imag))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return self._make(a * c, Fraction(0))
        return self._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __neg__(self):
        return self._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        out = ONE
        for _ in range(abs(k)):
            out = out * base
        return out

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianRational":
        return self._make(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if not n:
            raise DivisionByZero("division by exact zero")
        return self._make(self.re / n, -self.im / n)

    def sqrt(self) -> "GaussianRational":
        """Principal square root in Q(i); raises if there is none."""
        a, b = self.re, self.im
        if not a and not b:
            return self
        r = _rational_sqrt(a * a + b * b)
        if r is None:
            raise SqrtNotRepresentable(f"no square root of {self} in Q(i)")
        x = _rational_sqrt((a + r) / 2)
        if x is None:
            raise SqrtNotRepresentable(f"no square root of {self} in Q(i)")
        if x:
            s = self._make(x, b / (2 * x))
        else:
            # a is a negative rational and b == 0
            y = _rational_sqrt(-a)
            if y is None:
                raise SqrtNotRepresentable(f"no square root of {self} in Q(i)")
            s = self._make(Fraction(0), y)
        return s

    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        re, im = self.re, self.im
        if not im:
            return str(re)
        if im == 1:
            ipart = "i"
        elif im == -1:
            ipart = "-i"
        else:
            ipart = f"{im}*i"
        if not re:
            return ipart
        sep = "" if ipart.startswith("-") else "+"
        return f"{re}{sep}{ipart}"


ONE = GaussianRational._make(Fraction(1), Fraction(0))
ZERO = GaussianRational._make(Fraction(0), Fraction(0))
I = GaussianRational._make(Fraction(0), Fraction(1))


def csqrt_principal(z: complex) -> complex:
    """Principal branch: real part >= 0, and imaginary part >= 0 on the cut."""
    s = cmath.sqrt(complex(z))
    if s.real < 0 or (s.real == 0 and s.imag < 0):
        s = -s
    if s.real == 0 and s.imag == 0:
        return 0j
    return s


class ExactField:
    """Q(i) with exact arithmetic.  Square roots exist only sometimes."""

    name = "exact"
    exact = True
    tolerance = 0.0

    zero = ZERO
    one = ONE
    i = I

    def __call__(self, x) -> GaussianRational:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return GaussianRational(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, dict):
            return self.from_json(x)
        return GaussianRational(_frac(x))

    def is_zero(self, x) -> bool:
        return not x

    def inv(self, x):
        return x.inverse()

    def div(self, a, b):
        return a * b.inverse()

    def sqrt(self, x):
        return x.sqrt()

    def is_square(self, x) -> bool:
        try:
            x.sqrt()
        except SqrtNotRepresentable:
            return False
        return True

    def close(self, a, b, tol: float | None = None) -> bool:
        return a == b

    def to_json(self, x) -> dict:
        return {"re": str(x.re), "im": str(x.im)}

    def from_json(self, obj) -> GaussianRational:
        if isinstance(obj, dict):
            return GaussianRational(_frac(obj.get("re", 0)), _frac(obj.get("im", 0)))
        return self(obj)

    def fmt(self, x) -> str:
        return str(x)

    def random(self, rng: random.Random, height: int = 3, gaussian: bool = True,
               nonzero: bool = False) -> GaussianRational:
        while True:
            re = rng.randint(-height, height)
            im = rng.randint(-height, height) if gaussian else 0
            if re or im or not nonzero:
                return GaussianRational._make(Fraction(re), Fraction(im))

    def __eq__(self, other):
        return isinstance(other, ExactField)

    def __hash__(self):
        return hash("exact")

    def __repr__(self):
        return "ExactField()"


class ApproxField:
    """Complex floats; anything with modulus below ``tolerance`` counts as zero.

    ``magnitude_cap`` bounds how far a truncated series may grow relative to
    its leading coefficient before the remaining terms are considered noise
    (see :meth:`LaurentSeries._set`).  Absolute rounding error grows with the
    size of the coefficients, so terms past the cap cannot be trusted to the
    zero tolerance.
    """

    name = "approx"
    exact = False

    zero = 0j
    one = 1 + 0j
    i = 1j

    def __init__(self, tolerance: float = DEFAULT_TOLERANCE,
                 magnitude_cap: float = DEFAULT_MAGNITUDE_CAP):
        if not tolerance > 0:
            raise ValueError("tolerance must be positive")
        if not magnitude_cap > 1:
            raise ValueError("magnitude_cap must exceed 1")
        self.tolerance = float(tolerance)
        self.magnitude_cap = float(magnitude_cap)

    def __call__(self, x) -> complex:
        if isinstance(x, complex):
            return x
        if isinstance(x, GaussianRational):
            return complex(x)
        if isinstance(x, dict):
            return self.from_json(x)
        if isinstance(x, str):
            return complex(float(Fraction(x.strip())))
        return complex(x)

    def is_zero(self, x) -> bool:
        return abs(x) < self.tolerance

    def inv(self, x):
        if abs(x) < self.tolerance:
            raise DivisionByZero("division by a value below the zero tolerance")
        return 1 / x

    def div(self, a, b):
        return a * self.inv(b)

    def sqrt(self, x):
        return csqrt_principal(x)

    def is_square(self, x) -> bool:
        return True

    def close(self, a, b, tol: float | None = None) -> bool:
        return abs(a - b) <= (self.tolerance if tol is None else tol)

    def to_json(self, x) -> dict:
        return {"re": float(x.real), "im": float(x.imag)}

    def from_json(self, obj) -> complex:
        if isinstance(obj, dict):
            return complex(float(Fraction(str(obj.get("re", 0)))),
                           float(Fraction(str(obj.get("im", 0)))))
        return self(obj)

    def fmt(self, x) -> str:
        re, im = x.real, x.imag
        if abs(im) < self.tolerance:
            return f"{re:.12g}"
        if abs(re) < self.tolerance:
            if im == 1:
                return "i"
            if im == -1:
                return "-i"
            return f"{im:.12g}*i"
        return f"({re:.12g}{im:+.12g}*i)"

    def random(self, rng: random.Random, height: int = 3, gaussian: bool = True,
               nonzero: bool = False) -> complex:
        while True:
            re = rng.randint(-height, height)
            im = rng.randint(-height, height) if gaussian else 0
            if re or im or not nonzero:
                return complex(re, im)

    def __eq__(self, other):
        return (isinstance(other, ApproxField) and other.tolerance == self.tolerance
                and other.magnitude_cap == self.magnitude_cap)

    def __hash__(self):
        return hash(("approx", self.tolerance, self.magnitude_cap))

    def __repr__(self):
        return f"ApproxField(tolerance={self.tolerance!r}, magnitude_cap={self.magnitude_cap!r})"


EXACT = ExactField()
APPROX = ApproxField()


def get_field(backend: str = "exact", tolerance: float | None = None):
    """Look up a backend by name."""
    if backend == "exact":
        return EXACT
    if backend == "approx":
        return APPROX if tolerance is None else ApproxField(tolerance)
    raise ValueError(f"unknown backend {backend!r}")


def csqrt(a):
    """Square root of a single coefficient in whichever backend it belongs to."""
    if isinstance(a, GaussianRational):
        return a.sqrt()
    if isinstance(a, (int, Fraction)):
        return GaussianRational(a).sqrt()
    return csqrt_principal(a)
