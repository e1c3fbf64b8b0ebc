"""Truncated formal Laurent series over a coefficient field.

A series is stored as ``(val, coeffs, prec)``: ``coeffs[k]`` multiplies
``t**(val + k)`` and the series is known modulo ``O(t**prec)``.  When
``prec`` is ``None`` the series is an exact Laurent polynomial; monomials,
permutation matrices and other combinatorial inputs are kept exact this way so
they never lose precision.

Inverses and square roots of non-monomial exact inputs are truncated to the
current working precision (``get_working_precision()`` stored terms).
"""

from __future__ import annotations

import contextvars
import re
from contextlib import contextmanager
from fractions import Fraction

import numpy as np

from .coeff import EXACT, GaussianRational
from .errors import DivisionByZero, OddValuation, PrecisionExhausted

DEFAULT_PRECISION = 32

_working_precision = contextvars.ContextVar("working_precision", default=DEFAULT_PRECISION)


def get_working_precision() -> int:
    return _working_precision.get()


@contextmanager
def working_precision(terms: int):
    """Temporarily change how many terms truncated results keep."""
    if terms < 1:
        raise ValueError("working precision must be positive")
    token = _working_precision.set(int(terms))
    try:
        yield terms
    finally:
        _working_precision.reset(token)


def _convolve(field, a, b, n):
    """First ``n`` coefficients of the product of two coefficient lists."""
    if n <= 0 or not a or not b:
        return []
    a = a[:n]
    b = b[:n]
    if not field.exact:
        out = np.convolve(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
        return out[:n].tolist()
    zero = field.zero
    out = [zero] * min(n, len(a) + len(b) - 1)
    lb = len(b)
    for i, x in enumerate(a):
        if not x:
            continue
        m = min(lb, n - i)
        for j in range(m):
            y = b[j]
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def _inv_unit(field, u, n):
    """First ``n`` coefficients of ``1/u`` for a coefficient list with ``u[0] != 0``."""
    g = [field.inv(u[0])]
    k = 1
    while k < n:
        k = min(2 * k, n)
        ug = _convolve(field, u, g, k)
        e = [-x for x in ug] + [field.zero] * (k - len(ug))
        e[0] = e[0] + field.one
        corr = _convolve(field, g, e, k)
        g = g + [field.zero] * (k - len(g))
        g = [x + y for x, y in zip(g, corr + [field.zero] * (k - len(corr)))]
    return g


def _trusted(field, coeffs):
    """Number of leading coefficients of a computed inverse or root worth keeping.

    Newton iteration on floats amplifies rounding error along with the
    coefficients, so once they outgrow the leading one by more than the
    field's cap the rest is noise.  Exact fields keep everything.
    """
    if field.exact or not coeffs:
        return len(coeffs)
    lim = field.magnitude_cap * max(1.0, abs(coeffs[0]))
    for k, c in enumerate(coeffs):
        if abs(c) > lim:
            return k
    return len(coeffs)


def _sqrt_unit(field, u, n, s0):
    """First ``n`` coefficients of a square root of ``u`` whose constant term is ``s0``."""
    s = [s0]
    k = 1
    half = field(Fraction(1, 2))
    while k < n:
        k = min(2 * k, n)
        q = _convolve(field, u, _inv_unit(field, s, k), k)
        s = s + [field.zero] * (k - len(s))
        q = q + [field.zero] * (k - len(q))
        s = [(x + y) * half for x, y in zip(s, q)]
    return s


class LaurentSeries:
    """An element of K((t)) known up to ``O(t^prec)`` (or exactly if ``prec`` is None)."""

    __slots__ = ("field", "val", "coeffs", "prec")

    def __init__(self, coeffs=(), val: int = 0, prec: int | None = None, field=EXACT):
        coeffs = [field(c) for c in coeffs]
        self._set(field, int(val), coeffs, None if prec is None else int(prec))

    @classmethod
    def _new(cls, field, val, coeffs, prec) -> "LaurentSeries":
        f = object.__new__(cls)
        f._set(field, val, coeffs, prec)
        return f

    def _set(self, field, val, coeffs, prec):
        is_zero = field.is_zero
        if prec is not None:
            room = prec - val
            if room <= 0:
                coeffs = []
            elif len(coeffs) > room:
                coeffs = coeffs[:room]
        start = 0
        while start < len(coeffs) and is_zero(coeffs[start]):
            start += 1
        end = len(coeffs)
        if prec is None:
            while end > start and is_zero(coeffs[end - 1]):
                end -= 1
        coeffs = coeffs[start:end]
        if not coeffs:
            val = 0 if prec is None else prec
        else:
            val += start
            if prec is not None and len(coeffs) < prec - val:
                coeffs = coeffs + [field.zero] * (prec - val - len(coeffs))
        self.field = field
        self.val = val
        self.coeffs = tuple(coeffs)
        self.prec = prec

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, field=EXACT, prec: int | None = None) -> "LaurentSeries":
        return cls._new(field, 0 if prec is None else prec, [], prec)

    @classmethod
    def one(cls, field=EXACT) -> "LaurentSeries":
        return cls._new(field, 0, [field.one], None)

    @classmethod
    def monomial(cls, k: int, c=1, field=EXACT) -> "LaurentSeries":
        """The exact series ``c * t^k``."""
        return cls._new(field, int(k), [field(c)], None)

    @classmethod
    def constant(cls, c, field=EXACT) -> "LaurentSeries":
        return cls._new(field, 0, [field(c)], None)

    @classmethod
    def from_terms(cls, terms: dict, prec: int | None = None, field=EXACT) -> "LaurentSeries":
        """Build from a mapping ``exponent -> coefficient``."""
        if not terms:
            return cls.zero(field, prec)
        lo = min(terms)
        hi = max(terms) if prec is None else max(max(terms) + 1, prec) - 1
        coeffs = [field(terms.get(k, 0)) for k in range(lo, hi + 1)]
        return cls._new(field, lo, coeffs, prec)

    @classmethod
    def parse(cls, text: str, field=EXACT) -> "LaurentSeries":
        return parse_series(text, field)

    # basic properties -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        """True for the exact zero and for series that are zero to precision."""
        return not self.coeffs

    @property
    def is_exact(self) -> bool:
        return self.prec is None

    @property
    def ord(self) -> int:
        """Order of the series; raises if the series is zero (to precision)."""
        if not self.coeffs:
            if self.prec is None:
                raise PrecisionExhausted("the order of the exact zero is undefined")
            raise PrecisionExhausted(f"series is zero modulo O(t^{self.prec}); order unknown")
        return self.val

    def valuation(self) -> int:
        return self.ord

    @property
    def lead(self):
        if not self.coeffs:
            raise PrecisionExhausted("zero series has no leading coefficient")
        return self.coeffs[0]

    @property
    def rel_prec(self) -> int | None:
        return None if self.prec is None else self.prec - self.val

    def coefficient(self, k: int):
        """Coefficient of ``t^k``."""
        if self.prec is not None and k >= self.prec:
            raise PrecisionExhausted(f"coefficient of t^{k} lies beyond O(t^{self.prec})")
        idx = k - self.val
        if 0 <= idx < len(self.coeffs):
            return self.coeffs[idx]
        return self.field.zero

    def terms(self):
        """Non-zero ``(exponent, coefficient)`` pairs in increasing order."""
        is_zero = self.field.is_zero
        return [(self.val + k, c) for k, c in enumerate(self.coeffs) if not is_zero(c)]

    def ord_at_least(self, m: int) -> bool | None:
        """Is ``ord >= m``?  None when truncation makes the answer unknown."""
        if self.coeffs:
            return self.val >= m
        if self.prec is None or self.prec >= m:
            return True
        return None

    def is_monomial(self) -> bool:
        """True if the series is a single term ``c t^k`` up to its precision."""
        if not self.coeffs:
            return False
        is_zero = self.field.is_zero
        return all(is_zero(c) for c in self.coeffs[1:])

    def max_abs_coeff(self) -> float:
        return max((abs(complex(c)) for c in self.coeffs), default=0.0)

    # conversions ----------------------------------------------------------

    def to_field(self, field) -> "LaurentSeries":
        if field == self.field:
            return self
        return LaurentSeries._new(field, self.val, [field(c) for c in self.coeffs], self.prec)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by ``t^k``."""
        return LaurentSeries._new(self.field, self.val + k, list(self.coeffs),
                                  None if self.prec is None else self.prec + k)

    def truncate(self, prec: int) -> "LaurentSeries":
        """Forget everything from ``t^prec`` on."""
        if self.prec is not None and self.prec <= prec:
            return self
        return LaurentSeries._new(self.field, self.val, list(self.coeffs), prec)

    def unit_part(self) -> "LaurentSeries":
        """``self / t^ord``, a unit of K[[t]]."""
        return self.shift(-self.ord)

    def map_coeffs(self, fn) -> "LaurentSeries":
        return LaurentSeries._new(self.field, self.val, [fn(c) for c in self.coeffs], self.prec)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            if other.field == self.field:
                return self, other
            if self.field.exact:
                return self.to_field(other.field), other
            return self, other.to_field(self.field)
        if isinstance(other, (int, Fraction, GaussianRational, complex, float)):
            return self, LaurentSeries._new(self.field, 0, [self.field(other)], None)
        return None, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return _add(a, b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return _add(a, -b)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return _add(b, -a)

    def __neg__(self):
        return LaurentSeries._new(self.field, self.val, [-c for c in self.coeffs], self.prec)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, complex, float)):
            c = self.field(other)
            return LaurentSeries._new(self.field, self.val, [x * c for x in self.coeffs], self.prec)
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return _mul(a, b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, complex, float)):
            c = self.field.inv(self.field(other))
            return LaurentSeries._new(self.field, self.val, [x * c for x in self.coeffs], self.prec)
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return _mul(a, b.inv())

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return _mul(b, a.inv())

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inv()
        k = abs(k)
        out = LaurentSeries.one(self.field)
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def inv(self) -> "LaurentSeries":
        """Multiplicative inverse by Newton iteration."""
        f = self.field
        if not self.coeffs:
            raise DivisionByZero("cannot invert a series that is zero to precision")
        if self.prec is None and len(self.coeffs) == 1:
            return LaurentSeries._new(f, -self.val, [f.inv(self.coeffs[0])], None)
        n = self.rel_prec if self.prec is not None else get_working_precision()
        g = _inv_unit(f, list(self.coeffs), n)
        n = _trusted(f, g)
        return LaurentSeries._new(f, -self.val, g[:n], -self.val + n)

    def sqrt(self) -> "LaurentSeries":
        """A square root; exists iff the order is even (and the lead has a root)."""
        f = self.field
        if not self.coeffs:
            if self.prec is None:
                return self
            raise PrecisionExhausted("square root of a series that is zero to precision")
        if self.val % 2:
            raise OddValuation(f"order {self.val} is odd, so the series is not a square")
        s0 = f.sqrt(self.coeffs[0])
        half = self.val // 2
        if self.prec is None and len(self.coeffs) == 1:
            return LaurentSeries._new(f, half, [s0], None)
        n = self.rel_prec if self.prec is not None else get_working_precision()
        s = _sqrt_unit(f, list(self.coeffs), n, s0)
        n = _trusted(f, s)
        return LaurentSeries._new(f, half, s[:n], half + n)

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        try:
            a, b = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        if a is None:
            return NotImplemented
        return _add(a, -b).is_zero

    __hash__ = None

    def agrees(self, other, tol: float | None = None) -> bool:
        """Equal up to the common precision, with coefficients within ``tol``."""
        a, b = self._coerce(other)
        d = _add(a, -b)
        if tol is None:
            return d.is_zero
        return d.max_abs_coeff() <= tol

    # display and serialization -------------------------------------------

    def __str__(self):
        fmt = self.field.fmt
        parts = []
        for k, c in self.terms():
            cs = fmt(c)
            if k == 0:
                term = cs
            else:
                tk = "t" if k == 1 else f"t^{k}"
                if cs == "1":
                    term = tk
                elif cs == "-1":
                    term = "-" + tk
                else:
                    if re.search(r".[+-]", cs) and not cs.startswith("("):
                        cs = f"({cs})"
                    term = f"{cs}*{tk}"
            parts.append(term)
        if self.prec is not None:
            parts.append(f"O(t^{self.prec})")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"LaurentSeries({str(self)!r})"

    def to_json(self) -> dict:
        return {"val": self.val,
                "coeffs": [self.field.to_json(c) for c in self.coeffs],
                "prec": self.prec}

    @classmethod
    def from_json(cls, obj, field=EXACT) -> "LaurentSeries":
        if isinstance(obj, str):
            return parse_series(obj, field)
        if isinstance(obj, (int, float)):
            return cls.constant(obj, field)
        if isinstance(obj, dict) and "coeffs" in obj:
            coeffs = [field.from_json(c) for c in obj["coeffs"]]
            return cls._new(field, int(obj.get("val", 0)), coeffs, obj.get("prec"))
        if isinstance(obj, dict):
            return cls.constant(field.from_json(obj), field)
        raise ValueError(f"cannot read a series from {obj!r}")


def _add(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    field = f.field
    if f.prec is None:
        prec = g.prec
    elif g.prec is None:
        prec = f.prec
    else:
        prec = min(f.prec, g.prec)
    if not f.coeffs:
        return g if prec == g.prec else g.truncate(prec)
    if not g.coeffs:
        return f if prec == f.prec else f.truncate(prec)
    lo = min(f.val, g.val)
    hi = max(f.val + len(f.coeffs), g.val + len(g.coeffs))
    if prec is not None:
        hi = min(hi, prec)
    if hi <= lo:
        return LaurentSeries._new(field, lo, [], prec)
    out = [field.zero] * (hi - lo)
    for src in (f, g):
        off = src.val - lo
        for k, c in enumerate(src.coeffs):
            idx = off + k
            if idx >= len(out):
                break
            out[idx] = out[idx] + c
    return LaurentSeries._new(field, lo, out, prec)


def _mul(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    field = f.field
    if not f.coeffs or not g.coeffs:
        if (not f.coeffs and f.prec is None) or (not g.coeffs and g.prec is None):
            return LaurentSeries.zero(field)
        if not f.coeffs and not g.coeffs:
            return LaurentSeries.zero(field, f.prec + g.prec)
        if not f.coeffs:
            return LaurentSeries.zero(field, f.prec + g.val)
        return LaurentSeries.zero(field, g.prec + f.val)
    val = f.val + g.val
    precs = []
    if f.prec is not None:
        precs.append(f.prec + g.val)
    if g.prec is not None:
        precs.append(g.prec + f.val)
    if precs:
        prec = min(precs)
        n = prec - val
    else:
        prec = None
        n = len(f.coeffs) + len(g.coeffs) - 1
    return LaurentSeries._new(field, val, _convolve(field, list(f.coeffs), list(g.coeffs), n), prec)


# shorthand grammar ---------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)(?:[eE]([+-]?\d+))?|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        if m.group(1) is not None:
            num = m.group(1) + (("e" + m.group(2)) if m.group(2) else "")
            tokens.append(("num", num))
        else:
            ch = m.group(3)
            if ch.isspace():
                continue
            tokens.append((ch, ch))
    return tokens


class _Parser:
    """Recursive-descent reader for expressions like ``t^-2 + 3*t + i*t^4 + O(t^9)``."""

    def __init__(self, text, field):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.field = field

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self, kind=None):
        if self.pos >= len(self.tokens):
            raise ValueError(f"unexpected end of series {self.text!r}")
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ValueError(f"expected {kind!r} in series {self.text!r}, got {tok[1]!r}")
        self.pos += 1
        return tok

    def parse(self) -> LaurentSeries:
        out = self.expr()
        if self.pos != len(self.tokens):
            raise ValueError(f"trailing input in series {self.text!r}")
        return out

    def expr(self) -> LaurentSeries:
        out = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> LaurentSeries:
        out = self.factor()
        while True:
            nxt = self.peek()
            if nxt == "*":
                self.take()
                out = out * self.factor()
            elif nxt == "/":
                self.take()
                out = out / self.factor()
            elif nxt in ("num", "i", "t", "(", "O"):
                out = out * self.power()
            else:
                return out

    def factor(self) -> LaurentSeries:
        # unary signs, so that "1 + -2*t" and "2*-t" parse
        if self.peek() in ("+", "-"):
            neg = self.take()[0] == "-"
            out = self.factor()
            return -out if neg else out
        return self.power()

    def power(self) -> LaurentSeries:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() in ("+", "-"):
                sign = -1 if self.take()[0] == "-" else 1
            k = self.take("num")[1]
            if not k.isdigit():
                raise ValueError(f"exponent must be an integer in {self.text!r}")
            base = base ** (sign * int(k))
        return base

    def atom(self) -> LaurentSeries:
        kind, text = self.take()
        field = self.field
        if kind == "num":
            value = Fraction(text) if field.exact else float(text)
            return LaurentSeries.constant(value, field)
        if kind == "i":
            return LaurentSeries.constant(field.i, field)
        if kind == "t":
            return LaurentSeries.monomial(1, 1, field)
        if kind == "(":
            inner = self.expr()
            self.take(")")
            return inner
        if kind == "O":
            self.take("(")
            inner = self.expr()
            self.take(")")
            if inner.is_zero or not inner.is_monomial():
                raise ValueError("O(...) must contain a single power of t")
            return LaurentSeries.zero(field, inner.ord)
        raise ValueError(f"unexpected {text!r} in series {self.text!r}")


def parse_series(text: str, field=EXACT) -> LaurentSeries:
    """Read the shorthand grammar, e.g. ``"t^-2 + 3*t + i*t^4"``."""
    return _Parser(text, field).parse()


def t_power(k: int, field=EXACT) -> LaurentSeries:
    return LaurentSeries.monomial(k, 1, field)
