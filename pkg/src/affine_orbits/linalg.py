"""Square matrices over truncated Laurent series.

Indices are 0-based, as in the rest of the Python ecosystem.  Affine
permutations (see :mod:`affine_orbits.affperm`) keep the 1-based one-line
notation of the combinatorics.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from enum import Enum

from .coeff import EXACT
from .errors import DimensionMismatch, NotInvertible, PrecisionExhausted
from .laurent import LaurentSeries


class PrecisionWarning(UserWarning):
    """A membership question could not be decided at the available precision."""


class MatrixClass(str, Enum):
    GLnA = "GLnA"
    Iwahori = "Iwahori"
    OppositeIwahori = "OppositeIwahori"
    Monomial = "Monomial"
    Symmetric = "Symmetric"
    Skew = "Skew"


def _as_series(x, field) -> LaurentSeries:
    if isinstance(x, LaurentSeries):
        return x if x.field == field else x.to_field(field)
    return LaurentSeries.from_json(x, field)


class SeriesMatrix:
    """A dense ``n x n`` matrix of :class:`LaurentSeries`."""

    __slots__ = ("field", "rows")

    def __init__(self, rows, field=None):
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix must be square")
        if field is None:
            field = next((e.field for r in rows for e in r if isinstance(e, LaurentSeries)), EXACT)
        self.field = field
        self.rows = [[_as_series(e, field) for e in r] for r in rows]

    @classmethod
    def _wrap(cls, rows, field) -> "SeriesMatrix":
        m = object.__new__(cls)
        m.field = field
        m.rows = rows
        return m

    # constructors ---------------------------------------------------------

    @classmethod
    def zeros(cls, n: int, field=EXACT) -> "SeriesMatrix":
        z = LaurentSeries.zero(field)
        return cls._wrap([[z] * n for _ in range(n)], field)

    @classmethod
    def identity(cls, n: int, field=EXACT) -> "SeriesMatrix":
        m = cls.zeros(n, field)
        one = LaurentSeries.one(field)
        for i in range(n):
            m.rows[i][i] = one
        return m

    @classmethod
    def diag(cls, entries, field=None) -> "SeriesMatrix":
        entries = list(entries)
        if field is None:
            field = next((e.field for e in entries if isinstance(e, LaurentSeries)), EXACT)
        m = cls.zeros(len(entries), field)
        for i, e in enumerate(entries):
            m.rows[i][i] = _as_series(e, field)
        return m

    @classmethod
    def antidiag2(cls, x, field=None) -> "SeriesMatrix":
        """The 2x2 matrix ``[[0, x], [x, 0]]``."""
        if field is None:
            field = x.field if isinstance(x, LaurentSeries) else EXACT
        x = _as_series(x, field)
        z = LaurentSeries.zero(field)
        return cls._wrap([[z, x], [x, z]], field)

    @classmethod
    def elementary(cls, n: int, i: int, j: int, f, field=None) -> "SeriesMatrix":
        """``1_n + f E_ij`` for ``i != j``."""
        if i == j:
            raise ValueError("elementary matrices need i != j")
        if field is None:
            field = f.field if isinstance(f, LaurentSeries) else EXACT
        m = cls.identity(n, field)
        m.rows[i][j] = _as_series(f, field)
        return m

    @classmethod
    def embed(cls, n: int, idx, block: "SeriesMatrix") -> "SeriesMatrix":
        """Identity of size ``n`` with ``block`` placed on rows and columns ``idx``."""
        m = cls.identity(n, block.field)
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                m.rows[i][j] = block.rows[a][b]
        return m

    # basic access ---------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij) -> LaurentSeries:
        i, j = ij
        return self.rows[i][j]

    def __setitem__(self, ij, value):
        i, j = ij
        self.rows[i][j] = _as_series(value, self.field)

    def copy(self) -> "SeriesMatrix":
        return SeriesMatrix._wrap([list(r) for r in self.rows], self.field)

    def entries(self):
        for i, r in enumerate(self.rows):
            for j, e in enumerate(r):
                yield i, j, e

    def submatrix(self, idx) -> "SeriesMatrix":
        return SeriesMatrix._wrap([[self.rows[i][j] for j in idx] for i in idx], self.field)

    def map(self, fn) -> "SeriesMatrix":
        return SeriesMatrix._wrap([[fn(e) for e in r] for r in self.rows], self.field)

    def to_field(self, field) -> "SeriesMatrix":
        if field == self.field:
            return self
        return SeriesMatrix._wrap([[e.to_field(field) for e in r] for r in self.rows], field)

    @property
    def precision(self) -> int | None:
        """Smallest absolute precision among the entries (None if all exact)."""
        precs = [e.prec for _, _, e in self.entries() if e.prec is not None]
        return min(precs) if precs else None

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "SeriesMatrix"):
        if not isinstance(other, SeriesMatrix):
            raise TypeError("expected a SeriesMatrix")
        if other.n != self.n:
            raise DimensionMismatch(f"dimensions {self.n} and {other.n} differ")
        if other.field != self.field:
            if self.field.exact:
                return self.to_field(other.field), other
            return self, other.to_field(self.field)
        return self, other

    @property
    def T(self) -> "SeriesMatrix":
        return SeriesMatrix._wrap([list(c) for c in zip(*self.rows)], self.field)

    def transpose(self) -> "SeriesMatrix":
        return self.T

    def __matmul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        a, b = self._check(other)
        n = a.n
        field = a.field
        zero = LaurentSeries.zero(field)
        cols = list(zip(*b.rows))
        out = []
        for i in range(n):
            row = a.rows[i]
            live = [(k, x) for k, x in enumerate(row) if x.coeffs or x.prec is not None]
            new_row = []
            for j in range(n):
                col = cols[j]
                acc = None
                for k, x in live:
                    y = col[k]
                    if not y.coeffs and y.prec is None:
                        continue
                    term = x * y
                    acc = term if acc is None else acc + term
                new_row.append(zero if acc is None else acc)
            out.append(new_row)
        return SeriesMatrix._wrap(out, field)

    def __add__(self, other):
        a, b = self._check(other)
        return SeriesMatrix._wrap([[x + y for x, y in zip(r, s)] for r, s in zip(a.rows, b.rows)],
                                  a.field)

    def __sub__(self, other):
        a, b = self._check(other)
        return SeriesMatrix._wrap([[x - y for x, y in zip(r, s)] for r, s in zip(a.rows, b.rows)],
                                  a.field)

    def __neg__(self):
        return self.map(lambda e: -e)

    def __mul__(self, scalar):
        if isinstance(scalar, SeriesMatrix):
            return NotImplemented
        return self.map(lambda e: e * scalar)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrix) or other.n != self.n:
            return NotImplemented
        a, b = self._check(other)
        return all(x == y for r, s in zip(a.rows, b.rows) for x, y in zip(r, s))

    __hash__ = None

    # elimination ----------------------------------------------------------

    def det(self) -> LaurentSeries:
        """Determinant.

        Small matrices use a division-free Laplace expansion memoized over
        column subsets, so no series is ever inverted (inversion of a
        series with negative-order entries is where precision gets lost).
        Larger ones fall back to elimination with minimal-order pivots.
        """
        if self.n <= 10:
            return self._det_expansion()
        return self._det_elimination()

    def _det_expansion(self) -> LaurentSeries:
        n = self.n
        prev = {0: LaurentSeries.one(self.field)}
        for k in range(n):
            row = self.rows[k]
            cur = {}
            for mask, minor in prev.items():
                if minor.is_zero and minor.is_exact:
                    continue
                # sign: number of chosen columns to the right of column j
                for j in range(n):
                    bit = 1 << j
                    if mask & bit or (row[j].is_zero and row[j].is_exact):
                        continue
                    term = row[j] * minor
                    if bin(mask >> j).count("1") % 2:
                        term = -term
                    key = mask | bit
                    cur[key] = cur[key] + term if key in cur else term
            prev = cur
        return prev.get((1 << n) - 1, LaurentSeries.zero(self.field))

    def _det_elimination(self) -> LaurentSeries:
        n = self.n
        field = self.field
        a = [list(r) for r in self.rows]
        result = LaurentSeries.one(field)
        for k in range(n):
            best = None
            for r in range(k, n):
                e = a[r][k]
                if e.coeffs and (best is None or e.val < a[best][k].val):
                    best = r
            if best is None:
                if all(not a[r][k].coeffs and a[r][k].prec is None for r in range(k, n)):
                    return LaurentSeries.zero(field)
                raise PrecisionExhausted(f"column {k} is zero to precision during elimination")
            if best != k:
                a[k], a[best] = a[best], a[k]
                result = -result
            p = a[k][k]
            pinv = p.inv()
            for r in range(k + 1, n):
                e = a[r][k]
                if not e.coeffs and e.prec is None:
                    continue
                f = e * pinv
                row_k = a[k]
                a[r] = a[r][:k + 1] + [a[r][c] - f * row_k[c] for c in range(k + 1, n)]
            result = result * p
        return result

    def inverse(self) -> "SeriesMatrix":
        """Inverse by Gauss-Jordan elimination with minimal-order pivots."""
        n = self.n
        field = self.field
        a = [list(r) for r in self.rows]
        inv = SeriesMatrix.identity(n, field).rows
        for k in range(n):
            best = None
            for r in range(k, n):
                e = a[r][k]
                if e.coeffs and (best is None or e.val < a[best][k].val):
                    best = r
            if best is None:
                if all(not a[r][k].coeffs and a[r][k].prec is None for r in range(k, n)):
                    raise NotInvertible("matrix is singular")
                raise PrecisionExhausted(f"column {k} is zero to precision during inversion")
            a[k], a[best] = a[best], a[k]
            inv[k], inv[best] = inv[best], inv[k]
            pinv = a[k][k].inv()
            a[k] = [e * pinv for e in a[k]]
            inv[k] = [e * pinv for e in inv[k]]
            for r in range(n):
                if r == k:
                    continue
                e = a[r][k]
                if not e.coeffs and e.prec is None:
                    continue
                a[r] = [x - e * y for x, y in zip(a[r], a[k])]
                inv[r] = [x - e * y for x, y in zip(inv[r], inv[k])]
        return SeriesMatrix._wrap(inv, field)

    # predicates -----------------------------------------------------------

    def is_symmetric(self) -> bool:
        n = self.n
        return all(self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i + 1, n))

    def is_skew(self) -> bool:
        n = self.n
        return all((self.rows[i][j] + self.rows[j][i]).is_zero
                   for i in range(n) for j in range(i, n))

    # display and serialization -------------------------------------------

    def format(self, max_terms: int | None = None) -> str:
        """Aligned text; with ``max_terms`` long entries are cut to their leading terms."""
        def show(e):
            if max_terms is not None and len(e.coeffs) > max_terms:
                e = e.truncate(e.val + max_terms)
            return str(e)

        cells = [[show(e) for e in r] for r in self.rows]
        widths = [max(len(r[j]) for r in cells) for j in range(self.n)]
        return "\n".join("[ " + "  ".join(c.rjust(w) for c, w in zip(r, widths)) + " ]"
                         for r in cells)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"SeriesMatrix(n={self.n}, field={self.field!r})"

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [[e.to_json() for e in r] for r in self.rows]}

    @classmethod
    def from_json(cls, obj, field=EXACT) -> "SeriesMatrix":
        if isinstance(obj, dict):
            rows = obj["entries"]
            n = obj.get("n", len(rows))
            if len(rows) != n:
                raise DimensionMismatch(f"declared n={n} but found {len(rows)} rows")
        else:
            rows = obj
        return cls([[LaurentSeries.from_json(e, field) for e in r] for r in rows], field)


def congruence(b: SeriesMatrix, h: SeriesMatrix) -> SeriesMatrix:
    """The right action ``h . b = b^T h b``."""
    if b.n != h.n:
        raise DimensionMismatch(f"dimensions {b.n} and {h.n} differ")
    return b.T @ h @ b


def _ord_at_least(e: LaurentSeries, m: int, where: str):
    ok = e.ord_at_least(m)
    if ok is None:
        warnings.warn(f"cannot decide ord >= {m} for entry {where}: {e}", PrecisionWarning,
                      stacklevel=3)
        return False
    return ok


def membership(x: SeriesMatrix, cls) -> bool:
    """Decide membership in one of the classes of :class:`MatrixClass`.

    Returns False (with a :class:`PrecisionWarning`) when truncation leaves the
    answer open.
    """
    cls = MatrixClass(cls)
    n = x.n
    if cls is MatrixClass.Symmetric:
        return x.is_symmetric()
    if cls is MatrixClass.Skew:
        return x.is_skew()
    if cls is MatrixClass.Monomial:
        for i in range(n):
            if sum(1 for e in x.rows[i] if e.coeffs) != 1:
                return False
            if sum(1 for r in x.rows if r[i].coeffs) != 1:
                return False
        return True
    for i, j, e in x.entries():
        need = 0
        if cls is MatrixClass.Iwahori and i > j:
            need = 1
        if cls is MatrixClass.OppositeIwahori and i < j:
            need = 1
        if not _ord_at_least(e, need, f"({i}, {j})"):
            return False
    try:
        d = x.det()
        return d.ord == 0
    except PrecisionExhausted:
        warnings.warn("determinant is zero to precision", PrecisionWarning, stacklevel=2)
        return False


@dataclass(frozen=True)
class Residual:
    """Size of ``a - b``.

    ``max_abs`` is the largest coefficient modulus anywhere, ``min_prec`` the
    smallest known precision, and ``profile`` the largest modulus per degree
    (degrees with only zero coefficients are left out).
    """

    max_abs: float
    min_prec: int | None
    profile: tuple = ()

    def ok(self, tol: float = 0.0) -> bool:
        return self.max_abs <= tol

    def max_abs_upto(self, depth: int) -> float:
        return max((m for k, m in self.profile if k <= depth), default=0.0)

    def certifies(self, tol: float, depth: int) -> bool:
        """Known past ``t^depth`` in every entry and within ``tol`` up to ``t^depth``.

        Terms above ``depth`` do not affect which orbit is certified, so
        rounding noise there is reported in ``max_abs`` but not held against it.
        """
        known = self.min_prec is None or self.min_prec > depth
        return known and self.max_abs_upto(depth) <= tol


def residual(a: SeriesMatrix, b: SeriesMatrix) -> Residual:
    d = a - b
    per_degree: dict = {}
    for _, _, e in d.entries():
        for k, c in enumerate(e.coeffs):
            m = abs(complex(c))
            if m:
                deg = e.val + k
                per_degree[deg] = max(per_degree.get(deg, 0.0), m)
    max_abs = max(per_degree.values(), default=0.0)
    return Residual(max_abs, d.precision, tuple(sorted(per_degree.items())))


def random_series(rng: random.Random, field=EXACT, lo: int = 0, hi: int = 3, terms: int = 4,
                  height: int = 3, gaussian: bool = True, unit: bool = False) -> LaurentSeries:
    """A random Laurent polynomial with at most ``terms`` terms in degrees ``lo..hi``.

    With ``unit=True`` the constant term ``t^lo`` is forced non-zero.
    """
    count = rng.randint(1 if unit else 0, terms)
    degrees = list(range(lo, hi + 1))
    chosen = set()
    if unit:
        chosen.add(lo)
    rest = [d for d in degrees if d not in chosen]
    rng.shuffle(rest)
    chosen.update(rest[:max(0, count - len(chosen))])
    coeffs = {d: field.random(rng, height, gaussian, nonzero=(unit and d == lo))
              for d in sorted(chosen)}
    return LaurentSeries.from_terms(coeffs, None, field)


def random_iwahori(n: int, rng: random.Random, field=EXACT, height: int = 3, terms: int = 4,
                   max_degree: int = 3, det_one: bool = False,
                   gaussian: bool = True) -> SeriesMatrix:
    """A random element of the Iwahori subgroup with polynomial entries.

    Diagonal entries have non-zero constant terms, entries above the diagonal
    lie in K[[t]] and entries below lie in tK[[t]].  Coefficients are (Gaussian)
    integers of height at most ``height``; each entry has at most ``terms`` terms.
    With ``det_one=True`` the result is ``L D U`` instead: unipotent ``L``
    (entries in tA) and ``U`` (entries in A) around a diagonal ``D`` of units
    of Z[i] with determinant 1, so every entry is still a polynomial.
    """
    if det_one:
        return _random_iwahori_sl(n, rng, field, height, terms, max_degree, gaussian)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                e = random_series(rng, field, 0, max_degree, terms, height, gaussian, unit=True)
            elif i < j:
                e = random_series(rng, field, 0, max_degree, terms, height, gaussian)
            else:
                e = random_series(rng, field, 1, max_degree + 1, terms, height, gaussian)
            row.append(e)
        rows.append(row)
    return SeriesMatrix._wrap(rows, field)


def _random_iwahori_sl(n, rng, field, height, terms, max_degree, gaussian):
    lower = SeriesMatrix.identity(n, field)
    upper = SeriesMatrix.identity(n, field)
    for i in range(n):
        for j in range(i + 1, n):
            upper.rows[i][j] = random_series(rng, field, 0, max_degree, terms, height, gaussian)
            lower.rows[j][i] = random_series(rng, field, 1, max_degree + 1, terms, height, gaussian)
    # units of Z[i], so D^-1 has height 1 as well
    units = [field.one, -field.one, field.i, -field.i] if gaussian else [field.one, -field.one]
    diag = [rng.choice(units) for _ in range(n - 1)]
    prod = field.one
    for x in diag:
        prod = prod * x
    diag.append(field.inv(prod))
    d = SeriesMatrix.diag([LaurentSeries.constant(x, field) for x in diag], field)
    return lower @ d @ upper


def random_matrix(n: int, rng: random.Random, field=EXACT, lo: int = -1, hi: int = 2,
                  terms: int = 3, height: int = 3, gaussian: bool = True) -> SeriesMatrix:
    """A random (almost surely invertible) matrix of Laurent polynomials."""
    return SeriesMatrix._wrap(
        [[random_series(rng, field, lo, hi, terms, height, gaussian) for _ in range(n)]
         for _ in range(n)], field)


def random_orthogonal(n: int, rng: random.Random, field=EXACT, rotations: int | None = None,
                      height: int = 2, max_shift: int = 1) -> SeriesMatrix:
    """A random element of SO_n(F) with Laurent polynomial entries.

    Product of plane rotations ``[[c, -s], [s, c]]`` where ``c + is = a t^m``
    and ``c - is = a^-1 t^-m``, so ``c^2 + s^2 = 1`` holds exactly and nothing
    is ever inverted as a series.
    """
    k = SeriesMatrix.identity(n, field)
    if n < 2:
        return k
    half, i = field.one / 2, field.i
    for _ in range(2 * n if rotations is None else rotations):
        p, q = rng.sample(range(n), 2)
        a = field.random(rng, height, True, nonzero=True)
        ia = field.inv(a)
        m = rng.randint(-max_shift, max_shift)
        c = (LaurentSeries.monomial(m, a * half, field)
             + LaurentSeries.monomial(-m, ia * half, field))
        s = (LaurentSeries.monomial(m, -i * a * half, field)
             + LaurentSeries.monomial(-m, i * ia * half, field))
        r = SeriesMatrix.identity(n, field)
        r.rows[p][p], r.rows[p][q], r.rows[q][p], r.rows[q][q] = c, -s, s, c
        k = k @ r
    return k


def random_symplectic(n2: int, rng: random.Random, field=EXACT, factors: int = 4,
                      height: int = 2, max_shift: int = 1) -> SeriesMatrix:
    """A random element of Sp_2n(F) (for ``J = [[0, 1], [-1, 0]]``) with Laurent polynomial entries.

    Alternates the transvections ``[[1, S], [0, 1]]`` and ``[[1, 0], [S, 1]]``
    (``S`` symmetric) with ``diag(D, D^-T)`` for a monomial diagonal ``D``.
    """
    if n2 % 2:
        raise ValueError("symplectic matrices have even size")
    n = n2 // 2
    k = SeriesMatrix.identity(n2, field)
    for step in range(factors):
        f = SeriesMatrix.identity(n2, field)
        if step % 3 == 2:
            for j in range(n):
                a = field.random(rng, height, True, nonzero=True)
                m = rng.randint(-max_shift, max_shift)
                f.rows[j][j] = LaurentSeries.monomial(m, a, field)
                f.rows[n + j][n + j] = LaurentSeries.monomial(-m, field.inv(a), field)
        else:
            lower = step % 3 == 1
            for p in range(n):
                for q in range(p, n):
                    if rng.random() < 0.5:
                        x = random_series(rng, field, -max_shift, max_shift, 2, height)
                        r, c = (n + p, q) if lower else (p, n + q)
                        f.rows[r][c] = x
                        if p != q:
                            r2, c2 = (n + q, p) if lower else (q, n + p)
                            f.rows[r2][c2] = x
        k = k @ f
    return k
