"""Orbits of the symplectic group on the affine flag variety of GL_2n.

``Sp_2n(F) g`` is recorded by the skew matrix ``h = g^T J g``.  Iwahori
congruence brings every such ``h`` to a skew monomial matrix with bare powers
of ``t`` above the diagonal; its pattern is a fixed-point-free symmetric affine
permutation ``w``.  :func:`build_gw_Sp` produces a monomial ``g_w`` hitting a
given ``w`` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from ._reduction import Reducer, escalate, monomial_pattern, unit_matches
from .affperm import (AffinePermutation, DecoratedMonomial, Membership, classify_membership,
                      compose_perms)
from .coeff import EXACT
from .errors import DimensionMismatch, NotFpfInvolution, NotSkew, PrecisionExhausted
from .laurent import LaurentSeries
from .linalg import Residual, SeriesMatrix, congruence, residual


def sp_form(n: int, field=EXACT) -> SeriesMatrix:
    """``J = [[0, 1_n], [-1_n, 0]]``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    J = SeriesMatrix.zeros(2 * n, field)
    one = LaurentSeries.one(field)
    for k in range(n):
        J.rows[k][k + n] = one
        J.rows[k + n][k] = -one
    return J


def w_J(n: int) -> tuple:
    """The involution ``(1 n+1)(2 n+2)...(n 2n)`` in one-line notation."""
    return tuple(list(range(n + 1, 2 * n + 1)) + list(range(1, n + 1)))


def _transposition(m: int, a: int, b: int) -> tuple:
    out = list(range(1, m + 1))
    out[a - 1], out[b - 1] = b, a
    return tuple(out)


def _check_fpf(perm) -> tuple:
    perm = tuple(perm)
    m = len(perm)
    if sorted(perm) != list(range(1, m + 1)):
        raise NotFpfInvolution(f"{perm} is not a permutation")
    if m % 2 or any(perm[perm[i] - 1] != i + 1 or perm[i] == i + 1 for i in range(m)):
        raise NotFpfInvolution(f"{perm} is not a fixed-point-free involution")
    return perm


def sigma_w(fpf) -> tuple:
    """A permutation ``sigma`` with ``sigma^-1 w_J sigma = fpf``.

    Sweeps ``j = 1..n``, swapping ``j+n`` with the current partner of ``j``
    whenever they differ.  The transpositions conjugate ``fpf`` into ``w_J``
    when applied in sweep order, so ``sigma`` is their product taken last
    first.
    """
    cur = _check_fpf(fpf)
    m = len(cur)
    n = m // 2
    sigma = tuple(range(1, m + 1))
    for j in range(1, n + 1):
        x = cur[j - 1]
        if x == j + n:
            continue
        tau = _transposition(m, j + n, x)
        cur = compose_perms(tau, compose_perms(cur, tau))
        sigma = compose_perms(tau, sigma)
    return sigma


def _as_fpf_affine(w) -> AffinePermutation:
    if isinstance(w, str):
        w = AffinePermutation.parse(w)
    elif isinstance(w, DecoratedMonomial):
        w = w.affine()
    _check_fpf(w.bar)
    if not w.is_twisted_involution():
        raise NotFpfInvolution(f"{w}: shifts differ across a 2-cycle")
    return w


def build_h_sk(w, field=EXACT) -> DecoratedMonomial:
    """The matrix of ``w`` with every entry below the diagonal negated."""
    w = _as_fpf_affine(w)
    units = tuple(field.one if w.bar[j] < j + 1 else -field.one for j in range(w.n))
    return DecoratedMonomial(w.bar, w.shifts, units, field)


def _perm_matrix(p, field) -> SeriesMatrix:
    return AffinePermutation(p, (0,) * len(p)).to_matrix(field)


def build_gw_Sp(w, field=EXACT) -> SeriesMatrix:
    """``g_w = P(sigma_w) diag(t^sqrt(c)) P(s)`` with ``g_w^T J g_w = h^sk_w``.

    ``sqrt(c)`` zeroes the shift at the larger point of each 2-cycle, and
    ``s`` swaps the 2-cycles whose upper entry in ``P(sigma)^T J P(sigma)`` is -1.
    """
    w = _as_fpf_affine(w)
    root = [0 if w.bar[j] < j + 1 else w.shifts[j] for j in range(w.n)]
    D = SeriesMatrix.diag([LaurentSeries.monomial(c, 1, field) for c in root], field)
    return _perm_matrix(sigma_w(w.bar), field) @ D @ _perm_matrix(sign_swaps(w), field)


def sign_swaps(w) -> tuple:
    """The product of the 2-cycles of ``w`` whose upper entry in ``P(sigma_w)^T J P(sigma_w)`` is -1."""
    w = _as_fpf_affine(w)
    P = _perm_matrix(sigma_w(w.bar), EXACT)
    JP = congruence(P, sp_form(w.n // 2))
    s = tuple(range(1, w.n + 1))
    for i in range(w.n):
        j = w.bar[i] - 1
        if j > i and JP.rows[i][j] == -1:
            s = compose_perms(s, _transposition(w.n, i + 1, j + 1))
    return s


# --------------------------------------------------------------------------
# reduction


@dataclass(frozen=True)
class SkewCanonical:
    w: AffinePermutation
    form: DecoratedMonomial

    def to_json(self) -> dict:
        return {"w": str(self.w)}

    def __str__(self):
        return str(self.w)


class SpReduction(NamedTuple):
    """``congruence(witness, h) = canon.form`` with ``witness`` in the Iwahori subgroup."""

    canon: SkewCanonical
    witness: SeriesMatrix

    def check(self, h: SeriesMatrix) -> Residual:
        return residual(congruence(self.witness, h), self.canon.form.to_matrix())


def reduce_skew(h: SeriesMatrix, tol: float = 1e-8) -> SpReduction:
    """Iwahori-congruence normal form of an invertible skew matrix."""
    if not h.is_skew():
        raise NotSkew("matrix is not skew-symmetric")
    if h.n % 2:
        raise DimensionMismatch("an invertible skew matrix has even size")
    return escalate(lambda x: _reduce_skew(x, tol), h, lambda r: r.canon.form, tol)


def _reduce_skew(h: SeriesMatrix, tol: float) -> SpReduction:
    f = h.field
    red = Reducer(h, skew=True)
    while red.active:
        i, j, m = red.pivot()
        if i == j:
            raise PrecisionExhausted(f"diagonal entry ({i + 1}, {i + 1}) of a skew matrix is non-zero")
        red.eliminate([j, i])
        # the entry above the diagonal becomes +t^m; the higher index absorbs the unit
        d = SeriesMatrix.identity(red.n, f)
        d.rows[i][i] = red.h[j, i].unit_part().inv()
        red.apply(d, "scale", f"normalize unit at ({j + 1}, {i + 1})")
        red.retire([j, i])
    pattern = monomial_pattern(red.h)
    perm = tuple(r + 1 for r, _ in pattern)
    exps = tuple(e.val for _, e in pattern)
    depth = max(exps)
    for col, (row, e) in enumerate(pattern):
        want = 1 if row < col else -1
        u = e.unit_part()
        if not unit_matches(u, want, tol, depth - e.val):
            raise PrecisionExhausted(f"unit at ({row + 1}, {col + 1}) is {u}, not {want}")
    try:
        w = _as_fpf_affine(AffinePermutation(perm, exps))
    except NotFpfInvolution as exc:
        raise PrecisionExhausted(f"reduced pattern is not a skew monomial: {exc}") from exc
    form = build_h_sk(w, f)
    if Membership.SkewAPM not in classify_membership(form):
        raise PrecisionExhausted(f"reduced matrix {form} is not in SkewAPM")
    return SpReduction(SkewCanonical(w, form), red.witness)


def classify_Sp(g: SeriesMatrix, tol: float = 1e-8) -> SpReduction:
    """The ``w`` with ``g`` in ``Sp_2n(F) g_w B``, from ``g^T J g``.

    The transpose form is used throughout (``g^-1 J g`` is not skew in general).
    """
    if g.n % 2:
        raise DimensionMismatch(f"Sp needs even dimension, got {g.n}")
    return reduce_skew(g.T @ sp_form(g.n // 2, g.field) @ g, tol)


__all__ = [
    "SkewCanonical", "SpReduction", "build_gw_Sp", "build_h_sk", "classify_Sp", "reduce_skew",
    "sigma_w", "sign_swaps", "sp_form", "w_J",
]
