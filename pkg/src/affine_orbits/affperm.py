"""Extended affine permutations and decorated monomial matrices.

An affine permutation ``w = bar * tau^c`` is stored as the one-line notation
of ``bar`` (1-based) together with the shift vector ``c``.  As a map on the
integers ``w(i) = bar(i) + n*c_i`` for ``i`` in ``[1, n]``, extended by
``w(i + n) = w(i) + n``.  Its matrix has ``t^(c_i)`` at position
``(bar(i), i)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .coeff import EXACT
from .errors import DimensionMismatch, NotMonomial
from .laurent import LaurentSeries
from .linalg import SeriesMatrix


def _check_perm(bar) -> tuple:
    bar = tuple(int(x) for x in bar)
    if sorted(bar) != list(range(1, len(bar) + 1)):
        raise ValueError(f"{bar} is not a permutation of 1..{len(bar)}")
    return bar


def perm_from_cycles(cycles, n: int) -> tuple:
    """One-line notation of a product of disjoint cycles on ``[1, n]``."""
    out = list(range(1, n + 1))
    seen = set()
    for cyc in cycles:
        cyc = [int(x) for x in cyc]
        for x in cyc:
            if not 1 <= x <= n:
                raise ValueError(f"cycle entry {x} outside 1..{n}")
            if x in seen:
                raise ValueError(f"cycles are not disjoint at {x}")
            seen.add(x)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            out[a - 1] = b
    return tuple(out)


def parse_cycles(text: str) -> list:
    """Read ``"(1 2)(3 4)"`` (commas also accepted) into a list of cycles."""
    text = text.strip()
    if not text or text == "()":
        return []
    groups = re.findall(r"\(([^()]*)\)", text)
    if re.sub(r"\([^()]*\)", "", text).strip():
        raise ValueError(f"cannot read cycles from {text!r}")
    return [[int(x) for x in re.split(r"[\s,]+", g.strip()) if x] for g in groups if g.strip()]


def cycles_of(bar) -> list:
    """Non-trivial cycles, each starting at its smallest element, sorted."""
    n = len(bar)
    seen = [False] * (n + 1)
    out = []
    for start in range(1, n + 1):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        x = bar[start - 1]
        while x != start:
            cyc.append(x)
            seen[x] = True
            x = bar[x - 1]
        if len(cyc) > 1:
            out.append(cyc)
    return out


def format_cycles(bar) -> str:
    cycs = cycles_of(bar)
    if not cycs:
        return "()"
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycs)


def compose_perms(p, q) -> tuple:
    """``(p q)(i) = p(q(i))`` in one-line notation."""
    return tuple(p[q[i] - 1] for i in range(len(q)))


def invert_perm(p) -> tuple:
    out = [0] * len(p)
    for i, x in enumerate(p, start=1):
        out[x - 1] = i
    return tuple(out)


@dataclass(frozen=True)
class AffinePermutation:
    """The element ``bar * tau^shifts`` of the extended affine symmetric group."""

    bar: tuple
    shifts: tuple

    def __post_init__(self):
        bar = _check_perm(self.bar)
        shifts = tuple(int(c) for c in self.shifts)
        if len(shifts) != len(bar):
            raise DimensionMismatch("permutation and shift vector have different lengths")
        object.__setattr__(self, "bar", bar)
        object.__setattr__(self, "shifts", shifts)

    # construction ---------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "AffinePermutation":
        return cls(tuple(range(1, n + 1)), (0,) * n)

    @classmethod
    def from_cycles(cls, cycles, shifts) -> "AffinePermutation":
        shifts = tuple(shifts)
        if isinstance(cycles, str):
            cycles = parse_cycles(cycles)
        return cls(perm_from_cycles(cycles, len(shifts)), shifts)

    @classmethod
    def parse(cls, text: str) -> "AffinePermutation":
        """Read ``"CYCLES ; SHIFTS"``, e.g. ``"(2 4) ; 4,-2,-5,-2,3"``."""
        if ";" not in text:
            raise ValueError(f"expected 'CYCLES ; SHIFTS', got {text!r}")
        cyc, sh = text.split(";", 1)
        shifts = tuple(int(x) for x in re.split(r"[\s,]+", sh.strip()) if x)
        if not shifts:
            raise ValueError("empty shift vector")
        return cls.from_cycles(parse_cycles(cyc), shifts)

    @classmethod
    def from_window(cls, window) -> "AffinePermutation":
        """Inverse of :meth:`window`."""
        n = len(window)
        bar, shifts = [], []
        for w in window:
            r = (w - 1) % n + 1
            bar.append(r)
            shifts.append((w - r) // n)
        return cls(tuple(bar), tuple(shifts))

    # structure ------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.bar)

    def __call__(self, i: int) -> int:
        n = self.n
        k, r = divmod(i - 1, n)
        return self.bar[r] + n * self.shifts[r] + k * n

    def window(self) -> tuple:
        return tuple(self(i) for i in range(1, self.n + 1))

    def __mul__(self, other: "AffinePermutation") -> "AffinePermutation":
        if not isinstance(other, AffinePermutation):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch("affine permutations of different sizes")
        bar = compose_perms(self.bar, other.bar)
        shifts = tuple(self.shifts[other.bar[i] - 1] + other.shifts[i] for i in range(self.n))
        return AffinePermutation(bar, shifts)

    def compose(self, other: "AffinePermutation") -> "AffinePermutation":
        return self * other

    def inverse(self) -> "AffinePermutation":
        inv = invert_perm(self.bar)
        return AffinePermutation(inv, tuple(-self.shifts[inv[i] - 1] for i in range(self.n)))

    def star(self) -> "AffinePermutation":
        """``bar tau^c -> bar tau^(-c)``."""
        return AffinePermutation(self.bar, tuple(-c for c in self.shifts))

    def is_twisted_involution(self) -> bool:
        """``w* = w^-1``, i.e. the matrix is symmetric."""
        return self.star() == self.inverse()

    def fixed_points(self) -> list:
        return [i for i in range(1, self.n + 1) if self.bar[i - 1] == i]

    def shift_sum(self) -> int:
        return sum(self.shifts)

    def to_matrix(self, field=EXACT) -> SeriesMatrix:
        m = SeriesMatrix.zeros(self.n, field)
        for i, (r, c) in enumerate(zip(self.bar, self.shifts)):
            m.rows[r - 1][i] = LaurentSeries.monomial(c, 1, field)
        return m

    def cycles(self) -> str:
        return format_cycles(self.bar)

    def __str__(self):
        return f"{self.cycles()} ; " + ",".join(str(c) for c in self.shifts)

    def to_json(self) -> dict:
        return {"bar": list(self.bar), "shifts": list(self.shifts), "text": str(self)}

    @classmethod
    def from_json(cls, obj) -> "AffinePermutation":
        if isinstance(obj, str):
            return cls.parse(obj)
        if "bar" in obj:
            return cls(tuple(obj["bar"]), tuple(obj["shifts"]))
        return cls.parse(obj["text"])


@dataclass(frozen=True, eq=False)
class DecoratedMonomial:
    """A monomial matrix with ``units[j] * t^exps[j]`` at ``(perm[j], j)``.

    ``perm`` is 1-based one-line notation; ``units`` are field elements.
    """

    perm: tuple
    exps: tuple
    units: tuple
    field: object = EXACT

    def __post_init__(self):
        perm = _check_perm(self.perm)
        exps = tuple(int(e) for e in self.exps)
        units = tuple(self.field(u) for u in self.units)
        if not len(perm) == len(exps) == len(units):
            raise DimensionMismatch("perm, exps and units must have the same length")
        if any(self.field.is_zero(u) for u in units):
            raise ValueError("units must be non-zero")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "exps", exps)
        object.__setattr__(self, "units", units)

    @classmethod
    def from_affine(cls, w: AffinePermutation, field=EXACT, units=None) -> "DecoratedMonomial":
        if units is None:
            units = (field.one,) * w.n
        return cls(w.bar, w.shifts, tuple(units), field)

    @property
    def n(self) -> int:
        return len(self.perm)

    def affine(self) -> AffinePermutation:
        return AffinePermutation(self.perm, self.exps)

    @property
    def is_pure(self) -> bool:
        """All units equal 1 (an affine permutation matrix)."""
        one = self.field.one
        return all(self.field.close(u, one) for u in self.units)

    def entry(self, row: int, col: int):
        """``(unit, exponent)`` at a 1-based position, or None if the entry is 0."""
        if self.perm[col - 1] != row:
            return None
        return self.units[col - 1], self.exps[col - 1]

    def to_matrix(self) -> SeriesMatrix:
        m = SeriesMatrix.zeros(self.n, self.field)
        for j, (r, e, u) in enumerate(zip(self.perm, self.exps, self.units)):
            m.rows[r - 1][j] = LaurentSeries.monomial(e, u, self.field)
        return m

    def same_as(self, other: "DecoratedMonomial", tol: float | None = None) -> bool:
        if self.perm != other.perm or self.exps != other.exps:
            return False
        return all(self.field.close(a, self.field(b), tol) for a, b in zip(self.units, other.units))

    def __eq__(self, other):
        if not isinstance(other, DecoratedMonomial):
            return NotImplemented
        return self.same_as(other)

    __hash__ = None

    def __str__(self):
        fmt = self.field.fmt
        parts = []
        for j in range(self.n):
            parts.append(f"({self.perm[j]},{j + 1}):{fmt(self.units[j])}*t^{self.exps[j]}")
        return " ".join(parts)

    def to_json(self) -> dict:
        return {"perm": list(self.perm), "exps": list(self.exps),
                "units": [self.field.to_json(u) for u in self.units]}


def from_monomial(m: SeriesMatrix) -> DecoratedMonomial:
    """Read the pattern of a monomial matrix whose non-zero entries are single terms."""
    n = m.n
    perm, exps, units = [], [], []
    for j in range(n):
        rows = [i for i in range(n) if m.rows[i][j].coeffs]
        if len(rows) != 1:
            raise NotMonomial(f"column {j + 1} has {len(rows)} non-zero entries")
        i = rows[0]
        e = m.rows[i][j]
        if not e.is_monomial():
            raise NotMonomial(f"entry ({i + 1}, {j + 1}) = {e} is not a single term")
        perm.append(i + 1)
        exps.append(e.val)
        units.append(e.lead)
    if len(set(perm)) != n:
        raise NotMonomial("some row has more than one non-zero entry")
    return DecoratedMonomial(tuple(perm), tuple(exps), tuple(units), m.field)


class Membership(str, Enum):
    SymAPM = "SymAPM"
    eSymAPM = "eSymAPM"
    iSymAPM_case_i = "iSymAPM_case_i"
    iSymAPM_case_ii = "iSymAPM_case_ii"
    SkewAPM = "SkewAPM"
    AffineWeyl = "AffineWeyl"
    FixedPointFree = "FixedPointFree"


def classify_membership(m: DecoratedMonomial) -> set:
    """Every indexing set whose defining conditions ``m`` satisfies."""
    f = m.field
    n = m.n
    one, i_unit = f.one, f.i
    perm, exps, units = m.perm, m.exps, m.units
    close = f.close

    def partner_ok(rel):
        # rel(u_j, u_partner) must hold for every column and its mirror entry
        for j in range(n):
            r = perm[j] - 1
            if perm[r] != j + 1 or exps[r] != exps[j]:
                return False
            if not rel(units[j], units[r], j, r):
                return False
        return True

    symmetric = partner_ok(lambda a, b, j, r: close(a, b))
    skew = partner_ok(lambda a, b, j, r: close(a, -b))
    has_diag = any(perm[j] == j + 1 for j in range(n))
    pure = m.is_pure
    total = sum(exps)
    out = set()
    if symmetric and pure:
        out.add(Membership.SymAPM)
        if total % 2 == 0:
            out.add(Membership.eSymAPM)
        if not has_diag:
            out.add(Membership.FixedPointFree)
    if pure and total == 0:
        out.add(Membership.AffineWeyl)
    if symmetric and total == 0:
        if has_diag:
            ok = all(close(units[j], one) if perm[j] == j + 1 else close(units[j], i_unit)
                     for j in range(n))
            if ok:
                out.add(Membership.iSymAPM_case_i)
        else:
            ok = True
            for j in range(n):
                r = perm[j]
                if j == 0 or r == 1:
                    ok &= close(units[j], i_unit) or close(units[j], -i_unit)
                else:
                    ok &= close(units[j], i_unit)
            if ok:
                out.add(Membership.iSymAPM_case_ii)
    if skew and not has_diag:
        above_ok = all(close(units[j], one) for j in range(n) if perm[j] - 1 < j)
        if above_ok:
            out.add(Membership.SkewAPM)
    return out
