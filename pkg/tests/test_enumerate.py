from itertools import permutations, product

import pytest
from hypothesis import given, settings, strategies as st

from affine_orbits.affperm import DecoratedMonomial, Membership, classify_membership
from affine_orbits.coeff import EXACT
from affine_orbits.enumerate import (EnumSpec, IndexingSet, count, enum_indexing_set,
                                     fpf_involutions, involutions)

SET_TO_MEMBERSHIP = {
    IndexingSet.SymAPM: {Membership.SymAPM},
    IndexingSet.eSymAPM: {Membership.eSymAPM},
    IndexingSet.iSymAPM: {Membership.iSymAPM_case_i, Membership.iSymAPM_case_ii},
    IndexingSet.SkewAPM: {Membership.SkewAPM},
}


def key(d):
    return (d.perm, d.exps, tuple(complex(u) for u in d.units))


def brute_force(n, bound, which):
    """Every monomial pattern within bounds, with every unit in {1, -1, i, -i}."""
    units = [EXACT.one, -EXACT.one, EXACT.i, -EXACT.i]
    out = set()
    for perm in permutations(range(1, n + 1)):
        for exps in product(range(-bound, bound + 1), repeat=n):
            for us in product(units, repeat=n):
                d = DecoratedMonomial(perm, exps, us, EXACT)
                if classify_membership(d) & SET_TO_MEMBERSHIP[which]:
                    out.add(key(d))
    return out


def test_esym_n1():
    got = list(enum_indexing_set(EnumSpec(1, 2)))
    assert [d.exps for d in got] == [(-2,), (0,), (2,)]


def test_skew_n2():
    got = list(enum_indexing_set(EnumSpec(2, 1, IndexingSet.SkewAPM)))
    assert len(got) == 3
    for d, k in zip(got, (-1, 0, 1)):
        assert d.perm == (2, 1) and d.exps == (k, k)
        assert d.units == (-EXACT.one, EXACT.one)


def test_esym_n2_count():
    assert count(EnumSpec(2, 1)) == 8


def test_isym_emits_both_signs():
    got = list(enum_indexing_set(EnumSpec(2, 1, IndexingSet.iSymAPM)))
    fpf = [d for d in got if d.perm == (2, 1)]
    assert len(fpf) == 2
    assert {d.units for d in fpf} == {(EXACT.i, EXACT.i), (-EXACT.i, -EXACT.i)}


def test_spec_validation():
    with pytest.raises(ValueError):
        EnumSpec(0, 1)
    with pytest.raises(ValueError):
        EnumSpec(2, -1)
    with pytest.raises(ValueError):
        EnumSpec(3, 1, IndexingSet.SkewAPM)


def test_involution_counts():
    assert [len(involutions(n)) for n in range(1, 7)] == [1, 2, 4, 10, 26, 76]
    assert [len(fpf_involutions(2 * n)) for n in range(1, 5)] == [1, 3, 15, 105]


@pytest.mark.parametrize("which", list(IndexingSet))
@pytest.mark.parametrize("n", [1, 2, 3])
def test_matches_brute_force(n, which):
    if which is IndexingSet.SkewAPM and n % 2:
        return
    got = [key(d) for d in enum_indexing_set(EnumSpec(n, 1, which))]
    assert len(got) == len(set(got))
    assert set(got) == brute_force(n, 1, which)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2), st.sampled_from(list(IndexingSet)))
def test_members_pass_membership_and_order_is_stable(n, bound, which):
    if which is IndexingSet.SkewAPM and n % 2:
        n += 1
    spec = EnumSpec(n, bound, which)
    first = [key(d) for d in enum_indexing_set(spec)]
    assert first == [key(d) for d in enum_indexing_set(spec)]
    for d in enum_indexing_set(spec):
        assert classify_membership(d) & SET_TO_MEMBERSHIP[which]
    # lexicographic in (one-line form, shifts); the sign variants share a key
    keys = [(k[0], k[1]) for k in first]
    assert keys == sorted(keys)
