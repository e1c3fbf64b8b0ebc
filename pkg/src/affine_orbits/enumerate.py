"""Bounded enumeration of the indexing sets.

The sets themselves are infinite; bounding ``|shift| <= max_abs_exp`` makes
them finite.  Elements come out in lexicographic order of the involution's
one-line form, then of the shift vector, so repeated runs agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterator

from .affperm import DecoratedMonomial
from .coeff import EXACT


class IndexingSet(str, Enum):
    SymAPM = "SymAPM"
    eSymAPM = "eSymAPM"
    iSymAPM = "iSymAPM"
    SkewAPM = "SkewAPM"


@dataclass(frozen=True)
class EnumSpec:
    n: int
    max_abs_exp: int
    filter: IndexingSet = IndexingSet.eSymAPM

    def __post_init__(self):
        object.__setattr__(self, "filter", IndexingSet(self.filter))
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.max_abs_exp < 0:
            raise ValueError("max_abs_exp must be non-negative")
        if self.filter is IndexingSet.SkewAPM and self.n % 2:
            raise ValueError("SkewAPM needs an even dimension")


def _matchings(points: list, allow_fixed: bool) -> Iterator[list]:
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    if allow_fixed:
        for m in _matchings(rest, allow_fixed):
            yield m
    for k, partner in enumerate(rest):
        for m in _matchings(rest[:k] + rest[k + 1:], allow_fixed):
            yield [(first, partner)] + m


def _one_line(n: int, pairs) -> tuple:
    out = list(range(1, n + 1))
    for a, b in pairs:
        out[a - 1], out[b - 1] = b, a
    return tuple(out)


def involutions(n: int) -> list:
    """All involutions of ``[1, n]`` in one-line notation, sorted."""
    return sorted(_one_line(n, m) for m in _matchings(list(range(1, n + 1)), True))


def fpf_involutions(n: int) -> list:
    """All fixed-point-free involutions of ``[1, n]`` (perfect matchings), sorted."""
    if n % 2:
        return []
    return sorted(_one_line(n, m) for m in _matchings(list(range(1, n + 1)), False))


def _orbits(perm) -> list:
    """Orbits of an involution, each listed from its smallest element, in order."""
    seen, out = set(), []
    for i in range(1, len(perm) + 1):
        if i not in seen:
            orb = sorted({i, perm[i - 1]})
            seen.update(orb)
            out.append(orb)
    return out


def _shift_vectors(perm, bound: int) -> Iterator[tuple]:
    orbits = _orbits(perm)
    n = len(perm)
    for values in product(range(-bound, bound + 1), repeat=len(orbits)):
        c = [0] * n
        for orb, v in zip(orbits, values):
            for i in orb:
                c[i - 1] = v
        yield tuple(c)


def enum_indexing_set(spec: EnumSpec, field=EXACT) -> Iterator[DecoratedMonomial]:
    """Stream every member of the bounded indexing set exactly once."""
    n, bound, which = spec.n, spec.max_abs_exp, spec.filter
    one, i_unit = field.one, field.i
    perms = fpf_involutions(n) if which is IndexingSet.SkewAPM else involutions(n)
    for perm in perms:
        fixed = any(perm[j] == j + 1 for j in range(n))
        for c in _shift_vectors(perm, bound):
            total = sum(c)
            if which is IndexingSet.SymAPM:
                yield DecoratedMonomial(perm, c, (one,) * n, field)
            elif which is IndexingSet.eSymAPM:
                if total % 2 == 0:
                    yield DecoratedMonomial(perm, c, (one,) * n, field)
            elif which is IndexingSet.iSymAPM:
                if total != 0:
                    continue
                units = tuple(one if perm[j] == j + 1 else i_unit for j in range(n))
                yield DecoratedMonomial(perm, c, units, field)
                if not fixed:
                    k = perm[0] - 1
                    flipped = list(units)
                    flipped[0] = -flipped[0]
                    flipped[k] = -flipped[k]
                    yield DecoratedMonomial(perm, c, tuple(flipped), field)
            else:
                units = tuple(one if perm[j] < j + 1 else -one for j in range(n))
                yield DecoratedMonomial(perm, c, units, field)


def count(spec: EnumSpec) -> int:
    return sum(1 for _ in enum_indexing_set(spec))
