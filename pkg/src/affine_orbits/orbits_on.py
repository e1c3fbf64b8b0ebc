"""Orbits of the orthogonal group on the affine flag variety of GL_n.

A coset ``O_n(F) g`` is recorded by the symmetric matrix ``h = g^T g``; the
Iwahori subgroup acts by congruence ``h -> b^T h b``.  Every orbit contains
exactly one even symmetric affine permutation matrix, which
:func:`reduce_symmetric` finds together with a witness ``b``.
:func:`build_gw_On` goes the other way and writes down an explicit ``g_w``
with ``g_w^T g_w = w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from ._reduction import Reducer, Step, check_iwahori_factor, escalate, monomial_pattern
from .affperm import (AffinePermutation, DecoratedMonomial, Membership, classify_membership,
                      from_monomial)
from .errors import (DetNotSquare, NotESymAPM, NotInvertible, NotMonomial, NotSymmetric,
                     PrecisionExhausted)
from .laurent import LaurentSeries
from .linalg import Residual, SeriesMatrix, congruence, residual


class Reduction2x2(NamedTuple):
    """Outcome of the rank-two recipe: ``witness^T [[a, c], [c, d]] witness = form``."""

    form: SeriesMatrix
    witness: SeriesMatrix
    row: int


@dataclass
class ReductionResult:
    """Canonical form of a symmetric matrix under Iwahori congruence."""

    canon: DecoratedMonomial
    witness: SeriesMatrix
    steps: list
    form: SeriesMatrix

    @property
    def w(self) -> AffinePermutation:
        return self.canon.affine()

    def check(self, h: SeriesMatrix) -> Residual:
        """Residual of ``witness^T h witness`` against the canonical matrix."""
        return residual(congruence(self.witness, h), self.canon.to_matrix())


def certified(res: Residual, target: DecoratedMonomial, tol: float) -> bool:
    """A residual certifies ``target`` if it is small and known past every exponent."""
    return res.certifies(tol, max(target.exps, default=0))


# --------------------------------------------------------------------------
# rank two


def _upper(q: LaurentSeries) -> SeriesMatrix:
    f = q.field
    return SeriesMatrix._wrap([[LaurentSeries.one(f), q],
                               [LaurentSeries.zero(f), LaurentSeries.one(f)]], f)


def _lower(r: LaurentSeries) -> SeriesMatrix:
    f = r.field
    return SeriesMatrix._wrap([[LaurentSeries.one(f), LaurentSeries.zero(f)],
                               [r, LaurentSeries.one(f)]], f)


def _vanish(e: LaurentSeries) -> LaurentSeries:
    return LaurentSeries.zero(e.field, e.prec)


def _table_row(a, c, d) -> int:
    """Which of the twelve cases of the rank-two classification applies."""
    if c.is_zero:
        if a.is_zero or d.is_zero:
            if a.is_exact and d.is_exact and c.is_exact:
                raise NotInvertible("2x2 block is singular")
            raise PrecisionExhausted("2x2 block is singular to precision")
        return 1
    k = c.ord
    if a.is_zero and d.is_zero:
        return 2
    if d.is_zero:
        return 3 if k >= a.ord else 4
    if a.is_zero:
        return 5 if k > d.ord else 6
    m1, m2 = a.ord, d.ord
    if m1 >= m2:
        if k >= m1:
            return 7
        if k <= m2:
            return 8
        return 9
    if k >= m2:
        return 10
    if k < m1:
        return 11
    return 12


def reduce_2x2(a: LaurentSeries, c: LaurentSeries, d: LaurentSeries,
               normalize: str = "gl") -> Reduction2x2:
    """Bring ``[[a, c], [c, d]]`` to a diagonal or antidiagonal monomial form.

    ``normalize`` picks the final unit clean-up: ``"gl"`` uses an arbitrary
    diagonal unit matrix (result has bare powers of ``t``), ``"sl"`` only
    ``diag(x, 1/x)``, and ``"none"`` leaves the units alone.
    """
    H = SeriesMatrix._wrap([[a, c], [c, d]], a.field)
    W = SeriesMatrix.identity(2, a.field)
    row = _table_row(a, c, d)

    def act(b, kill):
        nonlocal H, W
        check_iwahori_factor(b, f"rank-two case {row}")
        H = congruence(b, H)
        W = W @ b
        # the entry is zero by construction; drop the rounding residue
        i, j = kill
        H.rows[i][j] = H.rows[j][i] = _vanish(H.rows[i][j])

    def from_antidiag_corner():
        # [[x, y], [y, 0]]: cases 3 and 4
        x, y = H[0, 0], H[0, 1]
        if y.ord >= x.ord:
            act(_upper(-y / x), (0, 1))
        else:
            act(_lower(-x / (2 * y)), (0, 0))

    def from_lower_corner():
        # [[0, y], [y, z]]: cases 5 and 6
        y, z = H[0, 1], H[1, 1]
        if y.ord > z.ord:
            act(_lower(-y / z), (0, 1))
        else:
            act(_upper(-z / (2 * y)), (1, 1))

    if row in (3, 4):
        from_antidiag_corner()
    elif row in (5, 6):
        from_lower_corner()
    elif row in (7, 10, 12):
        act(_upper(-c / a), (0, 1))
    elif row == 9:
        act(_lower(-c / d), (0, 1))
    elif row == 8:
        # kill the (2,2) entry: a q^2 + 2 c q + d = 0, root of non-negative order
        s = c * (1 - a * d / (c * c)).sqrt()
        act(_upper(-d / (c + s)), (1, 1))
        from_antidiag_corner()
    elif row == 11:
        # kill the (1,1) entry: d r^2 + 2 c r + a = 0, root of positive order
        s = c * (1 - a * d / (c * c)).sqrt()
        act(_lower(-a / (c + s)), (0, 0))
        from_lower_corner()

    if normalize != "none":
        D = _normalizer(H, normalize)
        H = congruence(D, H)
        W = W @ D
    return Reduction2x2(H, W, row)


def _normalizer(H: SeriesMatrix, mode: str) -> SeriesMatrix:
    f = H.field
    one = LaurentSeries.one(f)
    x, y, z = H[0, 0], H[0, 1], H[1, 1]
    if y.is_zero:
        if x.is_zero or z.is_zero:
            raise PrecisionExhausted("reduced 2x2 block lost its diagonal to precision")
        if mode == "gl":
            return SeriesMatrix.diag([x.unit_part().sqrt().inv(), z.unit_part().sqrt().inv()], f)
        alpha = z.unit_part().sqrt()
        return SeriesMatrix.diag([alpha, alpha.inv()], f)
    if x.is_zero and z.is_zero:
        if mode == "gl":
            return SeriesMatrix.diag([one, y.unit_part().inv()], f)
        return SeriesMatrix.identity(2, f)
    raise PrecisionExhausted("2x2 block is neither diagonal nor antidiagonal after reduction")


# --------------------------------------------------------------------------
# general n


def _require_symmetric(h: SeriesMatrix):
    if not h.is_symmetric():
        raise NotSymmetric("matrix is not symmetric")


def _extract(h: SeriesMatrix) -> DecoratedMonomial:
    if not h.field.exact:
        # float tails past the certified depth are noise; the residual check judges the rest
        pattern = monomial_pattern(h)
        return DecoratedMonomial(tuple(i + 1 for i, _ in pattern),
                                 tuple(e.val for _, e in pattern),
                                 tuple(e.lead for _, e in pattern), h.field)
    try:
        return from_monomial(h)
    except NotMonomial as exc:
        raise PrecisionExhausted(f"reduction did not end on a monomial matrix: {exc}") from exc


def monomialize(red: Reducer, normalize: str = "gl") -> None:
    """Run the pivot loop until ``red.h`` is monomial.

    With ``normalize="none"`` every factor is unipotent, so the witness has
    determinant 1 and the surviving entries keep their unit parts.
    """
    f = red.field
    while red.active:
        i, j, m = red.pivot()
        if i == j:
            red.eliminate([i])
            if normalize != "none":
                u = red.h[i, i].unit_part()
                d = SeriesMatrix.identity(red.n, f)
                d.rows[i][i] = u.sqrt().inv()
                red.apply(d, "scale", f"normalize unit at ({i + 1}, {i + 1})")
            red.retire([i])
        else:
            block = [j, i]
            red.eliminate(block)
            r2 = reduce_2x2(red.h[j, j], red.h[i, j], red.h[i, i], normalize)
            red.apply(SeriesMatrix.embed(red.n, block, r2.witness), "block",
                      f"rank-two case {r2.row} on rows/columns {{{j + 1},{i + 1}}}")
            # keep the cleaned block rather than its recomputation
            for a, p in enumerate(block):
                for c, q in enumerate(block):
                    red.h.rows[p][q] = r2.form.rows[a][c]
            red.retire(block)


def reduce_symmetric(h: SeriesMatrix, tol: float = 1e-8) -> ReductionResult:
    """Iwahori-congruence normal form of an invertible symmetric matrix.

    On the floating-point backend ``tol`` is the residual tolerance used to
    decide whether a retry with a looser magnitude cap is needed.
    """
    _require_symmetric(h)
    return escalate(_reduce_symmetric, h, lambda r: r.canon, tol)


def _reduce_symmetric(h: SeriesMatrix) -> ReductionResult:
    red = Reducer(h)
    f = h.field
    monomialize(red, "gl")
    mono = _extract(red.h)
    if not mono.is_pure:
        raise PrecisionExhausted(f"reduction left non-unit coefficients: {mono}")
    canon = DecoratedMonomial.from_affine(mono.affine(), f)
    if Membership.SymAPM not in classify_membership(canon):
        raise PrecisionExhausted(f"reduced matrix is not a symmetric affine permutation: {canon}")
    return ReductionResult(canon, red.witness, red.steps, red.h)


def det_is_square(h: SeriesMatrix) -> bool:
    """Is ``det(h)`` a square in K((t))?  Over a quadratically closed K: is its order even?"""
    d = h.det()
    if d.is_zero:
        raise NotInvertible("determinant is zero")
    return d.ord % 2 == 0


def classify_On(g: SeriesMatrix, tol: float = 1e-8) -> ReductionResult:
    """The ``w`` in eSymAPM with ``g`` in ``O_n(F) g_w B``."""
    res = reduce_symmetric(g.T @ g, tol)
    if sum(res.canon.exps) % 2:
        raise DetNotSquare(
            f"g^T g reduced to {res.w}, whose exponent sum is odd; precision was lost")
    return res


# --------------------------------------------------------------------------
# unrestricted congruence and square roots


def charsym1_reduce(h: SeriesMatrix):
    """``(p, form)`` with ``p^T h p = form`` for some ``p`` in GL_n(F).

    ``form`` is a symmetric permutation matrix whose diagonal entries are
    ``1`` or ``t``.  No Iwahori condition is imposed on ``p``.
    """
    _require_symmetric(h)
    red = Reducer(h)
    f = h.field
    n = h.n
    one = LaurentSeries.one(f)
    t = LaurentSeries.monomial(1, 1, f)
    form = SeriesMatrix.zeros(n, f)
    while red.active:
        r = red.active[0]
        col = [i for i in red.active if red.h[i, r].coeffs]
        if not col:
            if all(red.h[i, r].is_exact for i in red.active):
                raise NotInvertible(f"column {r + 1} vanishes")
            raise PrecisionExhausted(f"column {r + 1} is zero to precision")
        j = col[0]
        if j == r:
            red.eliminate([r], iwahori=False)
            e = red.h[r, r]
            b, u = e.ord, e.unit_part()
            d = SeriesMatrix.identity(n, f)
            d.rows[r][r] = u.sqrt().inv().shift(-(b // 2))
            red.apply(d, "scale", f"normalize ({r + 1}, {r + 1})", iwahori=False)
            form.rows[r][r] = t if b % 2 else one
            red.retire([r])
        else:
            red.eliminate([r, j], iwahori=False)
            a, c = red.h[r, j], red.h[j, j]
            if c.coeffs:
                red.apply(SeriesMatrix.elementary(n, r, j, -c / (2 * a)), "eliminate",
                          f"clear ({j + 1}, {j + 1})", iwahori=False)
            d = SeriesMatrix.identity(n, f)
            d.rows[r][r] = red.h[r, j].inv()
            red.apply(d, "scale", f"normalize ({r + 1}, {j + 1})", iwahori=False)
            form.rows[r][j] = form.rows[j][r] = one
            red.retire([r, j])
    return red.witness, form


def _sqrt_t_minus_1(f) -> LaurentSeries:
    return LaurentSeries.from_terms({0: -1, 1: 1}, None, f).sqrt()


def sqrt_factor_symmetric(h: SeriesMatrix) -> SeriesMatrix:
    """Some ``g`` with ``g^T g = h``; exists exactly when ``det(h)`` is a square."""
    p, form = charsym1_reduce(h)
    f = h.field
    n = h.n
    ts = [i for i in range(n) if form.rows[i][i].coeffs and form.rows[i][i].val == 1]
    if len(ts) % 2:
        raise DetNotSquare("determinant has odd order, so h is not of the form g^T g")
    s = _sqrt_t_minus_1(f)
    one = LaurentSeries.one(f)
    x = SeriesMatrix.zeros(n, f)
    for i in range(n):
        if form.rows[i][i].coeffs and form.rows[i][i].val == 0:
            x.rows[i][i] = one
    for a, b in zip(ts[::2], ts[1::2]):
        x.rows[a][a] = one
        x.rows[a][b] = -s
        x.rows[b][a] = s
        x.rows[b][b] = one
    half = LaurentSeries.constant(f.one / 2, f)
    for a in range(n):
        for b in range(a + 1, n):
            if form.rows[a][b].coeffs:
                x.rows[a][a] = LaurentSeries.constant(f.i, f)
                x.rows[a][b] = -half * f.i
                x.rows[b][a] = one
                x.rows[b][b] = half
    return x @ p.inverse()


# --------------------------------------------------------------------------
# representatives


def _as_esym(w) -> DecoratedMonomial:
    if isinstance(w, AffinePermutation):
        w = DecoratedMonomial.from_affine(w)
    if Membership.eSymAPM not in classify_membership(w):
        raise NotESymAPM(f"{w.affine()} is not an even symmetric affine permutation")
    return w


def build_gw_On(w, field=None) -> SeriesMatrix:
    """The representative ``g_w`` with ``g_w^T g_w = w``.

    Fixed points with odd exponent are paired in increasing order.
    """
    w = _as_esym(w)
    f = field if field is not None else w.field
    n = w.n
    perm, c = w.perm, w.exps
    g = SeriesMatrix.zeros(n, f)
    tp = lambda k, coef=1: LaurentSeries.monomial(k, coef, f)  # noqa: E731
    s = None
    odd = []
    for i in range(n):
        if perm[i] != i + 1:
            continue
        if c[i] % 2 == 0:
            g.rows[i][i] = tp(c[i] // 2)
        else:
            odd.append(i)
    if odd:
        s = _sqrt_t_minus_1(f)
    for i, j in zip(odd[::2], odd[1::2]):
        ta, tb = tp((c[i] - 1) // 2), tp((c[j] - 1) // 2)
        g.rows[i][i] = ta
        g.rows[i][j] = -s * tb
        g.rows[j][i] = ta * s
        g.rows[j][j] = tb
    half = f.one / 2
    for i in range(n):
        j = perm[i] - 1
        if j > i:
            a = c[i]
            g.rows[i][i] = tp(0, f.i)
            g.rows[i][j] = tp(a, -half * f.i)
            g.rows[j][i] = tp(0)
            g.rows[j][j] = tp(a, half)
    return g


__all__ = [
    "Reduction2x2", "ReductionResult", "Step", "build_gw_On", "certified", "charsym1_reduce",
    "classify_On", "det_is_square", "monomialize", "reduce_2x2", "reduce_symmetric", "sqrt_factor_symmetric",
]
