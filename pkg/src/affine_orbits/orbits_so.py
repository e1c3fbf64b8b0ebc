"""Orbits of the special orthogonal group on the affine flag variety of SL_n.

Same picture as :mod:`orbits_on` with everything inside SL_n: cosets are
recorded by ``h = g^T g`` with ``det h = 1`` and the Iwahori subgroup of SL_n
acts by congruence.  Canonical forms are decorated monomial matrices: powers of
``t`` on the diagonal, ``i`` times powers of ``t`` off it.  When the underlying
involution has no fixed point there are two orbits per ``w``, told apart by the
sign of the unit in the first row.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from ._reduction import Reducer, escalate, monomial_pattern, unit_matches
from .affperm import AffinePermutation, DecoratedMonomial, Membership, classify_membership
from .coeff import EXACT
from .errors import (DetNotOne, HasFixedPoint, NotAffineTwistedInvolution, NotSymmetric,
                     PrecisionExhausted)
from .laurent import LaurentSeries
from .linalg import Residual, SeriesMatrix, congruence, residual
from .orbits_on import _sqrt_t_minus_1, monomialize


class Sign(str, Enum):
    none = "none"
    plus = "+"
    minus = "-"


@dataclass(frozen=True)
class CanonicalSO:
    w: AffinePermutation
    sign: Sign
    form: DecoratedMonomial

    def __post_init__(self):
        object.__setattr__(self, "sign", Sign(self.sign))
        if self.w.shift_sum() != 0:
            raise NotAffineTwistedInvolution(f"shifts of {self.w} do not sum to zero")
        if (self.sign is Sign.none) != bool(self.w.fixed_points()):
            raise ValueError(f"sign {self.sign.value} does not fit {self.w}")

    def same_as(self, other: "CanonicalSO") -> bool:
        return self.w == other.w and self.sign is other.sign

    def to_json(self) -> dict:
        return {"w": str(self.w), "sign": self.sign.value}

    def __str__(self):
        return str(self.w) if self.sign is Sign.none else f"{self.w} [{self.sign.value}]"


class SOReduction(NamedTuple):
    """``congruence(witness, h) = canon.form`` with ``witness`` in the Iwahori of SL_n."""

    canon: CanonicalSO
    witness: SeriesMatrix

    def check(self, h: SeriesMatrix) -> Residual:
        return residual(congruence(self.witness, h), self.canon.form.to_matrix())


# --------------------------------------------------------------------------
# canonical forms and representatives


def _as_twisted_involution(w) -> AffinePermutation:
    if isinstance(w, str):
        w = AffinePermutation.parse(w)
    elif isinstance(w, DecoratedMonomial):
        w = w.affine()
    if not w.is_twisted_involution() or w.shift_sum() != 0:
        raise NotAffineTwistedInvolution(
            f"{w} is not an affine twisted involution (symmetric with shifts summing to 0)")
    return w


def _sign(sign) -> Sign:
    if isinstance(sign, Sign):
        return sign
    aliases = {"plus": Sign.plus, "minus": Sign.minus, None: Sign.none}
    return aliases[sign] if sign in aliases else Sign(sign)


def build_hw(w, field=None) -> DecoratedMonomial:
    """The matrix of ``w`` with every off-diagonal entry multiplied by ``i``."""
    w = _as_twisted_involution(w)
    f = field if field is not None else EXACT
    units = tuple(f.one if w.bar[j] == j + 1 else f.i for j in range(w.n))
    return DecoratedMonomial(w.bar, w.shifts, units, f)


def build_hw_pm(w, sign, field=None) -> DecoratedMonomial:
    """``h_w`` (plus) or ``d h_w d`` with ``d = diag(-1, 1, ..., 1)`` (minus)."""
    w = _as_twisted_involution(w)
    sign = _sign(sign)
    if w.fixed_points():
        raise HasFixedPoint(f"{w} has fixed points; the signed forms need a fixed-point-free w")
    if sign is Sign.none:
        raise ValueError("fixed-point-free w needs sign + or -")
    h = build_hw(w, field)
    if sign is Sign.plus:
        return h
    units = list(h.units)
    k = w.bar[0] - 1
    units[0] = -units[0]
    units[k] = -units[k]
    return DecoratedMonomial(h.perm, h.exps, tuple(units), h.field)


def canonical_form(w, sign=Sign.none, field=None) -> DecoratedMonomial:
    """``h_w`` or ``h_w^+-``, whichever the fixed points of ``w`` call for."""
    w = _as_twisted_involution(w)
    if w.fixed_points():
        if _sign(sign) is not Sign.none:
            raise ValueError(f"{w} has fixed points, so it carries no sign")
        return build_hw(w, field)
    return build_hw_pm(w, sign, field)


def build_gw_SOn(w, sign=Sign.none, field=None) -> SeriesMatrix:
    """A determinant-one ``g`` with ``g^T g`` equal to ``h_w`` or ``h_w^+-``.

    Even fixed points become ``t^(c/2)``, odd ones are paired in increasing
    order through a block involving ``(t - 1)^(1/2)``, and each 2-cycle gets a
    2x2 block of determinant ``t^a``.
    """
    w = _as_twisted_involution(w)
    sign = _sign(sign)
    form = canonical_form(w, sign, field)
    f = form.field
    n = w.n
    bar, c = w.bar, w.shifts
    g = SeriesMatrix.zeros(n, f)

    def tp(k, coef=1):
        return LaurentSeries.monomial(k, coef, f)

    odd = []
    for j in range(n):
        if bar[j] != j + 1:
            continue
        if c[j] % 2 == 0:
            g.rows[j][j] = tp(c[j] // 2)
        else:
            odd.append(j)
    if odd:
        s = _sqrt_t_minus_1(f)
        for j, k in zip(odd[::2], odd[1::2]):
            ta, tb = tp((c[j] - 1) // 2), tp((c[k] - 1) // 2)
            g.rows[j][j] = ta
            g.rows[j][k] = -s * tb
            g.rows[k][j] = ta * s
            g.rows[k][k] = tb
    half = f.one / 2
    for j in range(n):
        k = bar[j] - 1
        if k <= j:
            continue
        a = c[j]
        if j == 0 and sign is Sign.minus:
            block = [[tp(0, f.i), tp(a, -half)], [tp(0), tp(a, -half * f.i)]]
        else:
            block = [[tp(a, half), tp(0, f.i)], [tp(a, half * f.i), tp(0)]]
        for r, rr in enumerate((j, k)):
            for q, qq in enumerate((j, k)):
                g.rows[rr][qq] = block[r][q]
    return g


# --------------------------------------------------------------------------
# reduction


# Floating-point determinants of products pick up rounding far above the
# coefficient tolerance; this screen only has to catch inputs that are not in
# SL_n at all.  The witness residual does the real checking.  The allowance
# grows with the l1 bound on the coefficients of the determinant.
DET_SCREEN = 1e-6
DET_ROUNDING = 1e-12


def _l1_bound(m: SeriesMatrix) -> float:
    out = 1.0
    for row in m.rows:
        out *= sum(sum(abs(complex(c)) for c in e.coeffs) for e in row)
    return out


def _require_det_one(m: SeriesMatrix, what: str):
    d = m.det()
    e = d - 1
    if e.prec is not None and e.prec <= 0:
        raise PrecisionExhausted(f"det({what}) is only known modulo O(t^{e.prec})")
    if d.field.exact:
        ok = e.is_zero
    else:
        ok = e.max_abs_coeff() <= max(DET_SCREEN, DET_ROUNDING * _l1_bound(m))
    if not ok:
        raise DetNotOne(f"det({what}) = {d}, not 1")


def _unit(red: Reducer, i: int, j: int) -> LaurentSeries:
    return red.h[i, j].unit_part()


def _scale(red: Reducer, factors: dict, detail: str):
    d = SeriesMatrix.identity(red.n, red.field)
    for k, x in factors.items():
        d.rows[k][k] = x
    red.apply(d, "scale", detail)


def reduce_symmetric_sl(h: SeriesMatrix, tol: float = 1e-8) -> SOReduction:
    """Canonical form of a determinant-one symmetric matrix under SL_n-Iwahori congruence.

    The unit left over after the diagonal clean-up is forced by ``det = 1``;
    it is checked against 1 (or against +-i in the fixed-point-free case).  On
    the approximate backend the check uses tolerance ``tol`` and stops at the
    largest exponent of the result, the same depth the residual certifies.
    """
    if not h.is_symmetric():
        raise NotSymmetric("matrix is not symmetric")
    _require_det_one(h, "h")
    return escalate(lambda x: _reduce_symmetric_sl(x, tol), h, lambda r: r.canon.form, tol)


def _reduce_symmetric_sl(h: SeriesMatrix, tol: float) -> SOReduction:
    f = h.field
    i_unit = f.i
    red = Reducer(h)
    # unipotent factors only, so the witness stays in SL_n
    monomialize(red, "none")
    pattern = monomial_pattern(red.h)
    perm = tuple(i + 1 for i, _ in pattern)
    exps = tuple(e.val for _, e in pattern)
    n = h.n
    fixed = [j for j in range(n) if perm[j] == j + 1]
    pairs = [(j, perm[j] - 1) for j in range(n) if perm[j] - 1 > j]
    if sum(exps) != 0:
        raise PrecisionExhausted(f"reduced exponents {exps} do not sum to 0 despite det 1")
    # units are only compared up to the degree the residual certifies
    depth = max(exps)

    if fixed:
        last = fixed[-1]
        for j, k in pairs:
            c = _unit(red, j, k)
            _scale(red, {j: i_unit * c.inv(), last: -i_unit * c},
                   f"set unit at ({j + 1}, {k + 1}) to i")
        for j in fixed[:-1]:
            r = _unit(red, j, j).sqrt()
            _scale(red, {j: r.inv(), last: r}, f"set unit at ({j + 1}, {j + 1}) to 1")
        if not unit_matches(_unit(red, last, last), f.one, tol, depth - exps[last]):
            raise PrecisionExhausted(
                f"forced unit at ({last + 1}, {last + 1}) is {_unit(red, last, last)}, not 1")
        sign = Sign.none
    else:
        for j, k in pairs:
            if j == 0:
                continue
            c = _unit(red, j, k)
            _scale(red, {j: i_unit * c.inv(), 0: -i_unit * c},
                   f"set unit at ({j + 1}, {k + 1}) to i")
        k = perm[0] - 1
        u = _unit(red, 0, k)
        if unit_matches(u, i_unit, tol, depth - exps[0]):
            sign = Sign.plus
        elif unit_matches(u, -i_unit, tol, depth - exps[0]):
            sign = Sign.minus
        else:
            raise PrecisionExhausted(f"forced unit at (1, {k + 1}) is {u}, not i or -i")

    w = AffinePermutation(perm, exps)
    try:
        form = canonical_form(w, sign, f)
    except NotAffineTwistedInvolution as exc:
        raise PrecisionExhausted(f"reduced pattern is not symmetric: {exc}") from exc
    members = classify_membership(form)
    if not members & {Membership.iSymAPM_case_i, Membership.iSymAPM_case_ii}:
        raise PrecisionExhausted(f"reduced matrix {form} is not in iSymAPM")
    return SOReduction(CanonicalSO(w, sign, form), red.witness)


def classify_SOn(g: SeriesMatrix, tol: float = 1e-8) -> SOReduction:
    """The ``(w, sign)`` with ``g`` in ``SO_n(F) g_w B``, plus the witness for ``g^T g``."""
    _require_det_one(g, "g")
    return reduce_symmetric_sl(g.T @ g, tol)


__all__ = [
    "CanonicalSO", "SOReduction", "Sign", "build_gw_SOn", "build_hw", "build_hw_pm",
    "canonical_form", "classify_SOn", "reduce_symmetric_sl",
]
