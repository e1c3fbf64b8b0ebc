"""Pivoted block elimination under the Iwahori congruence action.

The three orbit reductions share the same skeleton: pick the least-order
entry that is leftmost in its column and upmost in its row, clear its rows
and columns with Iwahori unipotents, normalize the surviving 1x1 or 2x2
block, and recurse on the rest.  :class:`Reducer` holds the running state
(current matrix, accumulated witness, audit log).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from .coeff import ApproxField
from .errors import DivisionByZero, NotInvertible, PrecisionExhausted
from .laurent import LaurentSeries
from .linalg import SeriesMatrix, congruence


@dataclass(frozen=True)
class Step:
    """One congruence factor applied during a reduction."""

    kind: str
    detail: str
    factor: SeriesMatrix = field(repr=False)


def check_iwahori_factor(b: SeriesMatrix, what: str) -> None:
    """Cheap membership test for the factors we generate.

    Every factor is either unipotent or diagonal, so it suffices to look at
    the orders of the entries: units on the diagonal, ``A`` above, ``tA`` below.
    """
    n = b.n
    for i in range(n):
        for j in range(n):
            e = b.rows[i][j]
            if i == j:
                ok = bool(e.coeffs) and e.val == 0
            else:
                ok = e.ord_at_least(1 if i > j else 0)
            if not ok:
                raise PrecisionExhausted(
                    f"{what}: factor entry ({i + 1}, {j + 1}) = {e} breaks the Iwahori condition")


def inverse_2x2(m):
    """Inverse of ``[[a, b], [c, d]]`` given as nested lists of series."""
    (a, b), (c, d) = m
    det = a * d - b * c
    if det.is_zero:
        raise PrecisionExhausted("pivot block is singular to precision")
    r = det.inv()
    return [[d * r, -b * r], [-c * r, a * r]]


class Reducer:
    def __init__(self, h: SeriesMatrix, skew: bool = False):
        self.h = h.copy()
        self.skew = skew
        self.n = h.n
        self.field = h.field
        self.witness = SeriesMatrix.identity(self.n, self.field)
        self.steps: list[Step] = []
        self.active = list(range(self.n))

    def apply(self, b: SeriesMatrix, kind: str, detail: str, iwahori: bool = True):
        if iwahori:
            check_iwahori_factor(b, detail)
        self.h = congruence(b, self.h)
        self.witness = self.witness @ b
        self.steps.append(Step(kind, detail, b))
        if self.skew:
            # a congruent skew matrix has an exactly zero diagonal
            for k in range(self.n):
                e = self.h.rows[k][k]
                self.h.rows[k][k] = LaurentSeries.zero(self.field, e.prec)

    def pivot(self):
        """``(i, j, m)`` with ``i >= j`` for the current active block."""
        rows = self.h.rows
        act = self.active
        best = None
        for j in act:
            for i in act:
                e = rows[i][j]
                if e.coeffs and (best is None or e.val < best[2]):
                    best = (i, j, e.val)
        if best is None:
            if all(rows[i][j].is_exact for i in act for j in act):
                raise NotInvertible("remaining block is zero")
            raise PrecisionExhausted("remaining block is zero to precision")
        m = best[2]
        for i in act:
            for j in act:
                e = rows[i][j]
                if not e.coeffs and e.prec is not None and e.prec <= m:
                    raise PrecisionExhausted(
                        f"entry ({i + 1}, {j + 1}) is O(t^{e.prec}) and may compete with "
                        f"the pivot of order {m}")
        return best

    def eliminate(self, block, iwahori: bool = True):
        """Clear rows and columns ``block`` outside the block itself.

        Uses the Schur complement multipliers ``X = -H_PP^-1 H_PR``, which the
        pivot rule keeps inside the Iwahori subgroup.  Pass ``iwahori=False``
        for plain GL_n(F) congruence, where no pivot rule is followed.
        """
        rest = [r for r in self.active if r not in block]
        if not rest:
            return
        rows = self.h.rows
        if len(block) == 1:
            (p,) = block
            inv = [[rows[p][p].inv()]]
        else:
            inv = inverse_2x2([[rows[p][q] for q in block] for p in block])
        b = SeriesMatrix.identity(self.n, self.field)
        touched = False
        for a, p in enumerate(block):
            for r in rest:
                x = LaurentSeries.zero(self.field)
                for c, q in enumerate(block):
                    if rows[q][r].coeffs:
                        x = x - inv[a][c] * rows[q][r]
                if x.coeffs:
                    b.rows[p][r] = x
                    touched = True
        if touched:
            idx = ",".join(str(p + 1) for p in block)
            self.apply(b, "eliminate", f"clear rows/columns {{{idx}}}", iwahori)
            # cleared by construction; replace rounding residue by O(t^prec)
            rows = self.h.rows
            for p in block:
                for r in rest:
                    rows[p][r] = LaurentSeries.zero(self.field, rows[p][r].prec)
                    rows[r][p] = LaurentSeries.zero(self.field, rows[r][p].prec)

    def retire(self, block):
        self.active = [r for r in self.active if r not in block]


def unit_matches(u: LaurentSeries, value, tol: float, upto: int) -> bool:
    """``u == value``; on floats only the terms of degree ``<= upto`` are compared.

    Terms past the certified depth carry rounding noise that has no bearing
    on the orbit.
    """
    target = LaurentSeries.constant(value, u.field)
    if u.field.exact:
        return u.agrees(target)
    return u.truncate(max(1, upto + 1)).agrees(target, tol)


def monomial_pattern(h: SeriesMatrix):
    """``[(row, entry)]`` for the single non-zero entry of each column."""
    n = h.n
    out = []
    for j in range(n):
        rows = [i for i in range(n) if h.rows[i][j].coeffs]
        if len(rows) != 1:
            raise PrecisionExhausted(
                f"reduction did not end on a monomial matrix: column {j + 1} has "
                f"{len(rows)} non-zero entries")
        out.append((rows[0], h.rows[rows[0]][j]))
    if len({i for i, _ in out}) != n:
        raise PrecisionExhausted("reduction did not end on a monomial matrix")
    return out


# --------------------------------------------------------------------------
# cap escalation on the floating-point backend

ESCALATION_CAPS = (1e5, 1e6, 1e7, 1e8)


def _retarget(obj, f):
    """``obj`` with every matrix and monomial moved to the field ``f``."""
    if isinstance(obj, SeriesMatrix):
        return obj.to_field(f)
    if isinstance(obj, ApproxField):
        return f
    if isinstance(obj, list):
        return [_retarget(x, f) for x in obj]
    if hasattr(obj, "_replace"):
        return obj._replace(**{k: _retarget(v, f) for k, v in obj._asdict().items()})
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        changes = {fl.name: _retarget(getattr(obj, fl.name), f)
                   for fl in dataclasses.fields(obj) if fl.init}
        return dataclasses.replace(obj, **changes)
    return obj


def escalate(run, h: SeriesMatrix, target, tol: float):
    """Run ``run(h)``, loosening the magnitude cap until the witness certifies.

    A tight cap throws away series tails whose coefficients grow quickly,
    which can leave the witness known to too few terms to certify the
    canonical form; a loose cap keeps them but lets rounding noise through.
    Looser caps are tried only after the tighter one falls short, and a
    result is accepted only when ``result.check`` certifies ``target(result)``.
    If no attempt certifies, the last uncertified result is returned (or the
    first error re-raised) so callers can report it.
    """
    f = h.field
    if f.exact:
        return run(h)
    caps = [f.magnitude_cap] + [c for c in ESCALATION_CAPS if c > f.magnitude_cap]
    first_error = last = None
    for cap in caps:
        g = f if cap == f.magnitude_cap else ApproxField(f.tolerance, cap)
        hg = h.to_field(g)
        try:
            res = run(hg)
        except (PrecisionExhausted, DivisionByZero) as exc:
            first_error = first_error or exc
            continue
        exps = target(res).exps
        if res.check(hg).certifies(tol, max(exps, default=0)):
            return res if g is f else _retarget(res, f)
        last = res if g is f else _retarget(res, f)
    if last is not None:
        return last
    raise first_error
