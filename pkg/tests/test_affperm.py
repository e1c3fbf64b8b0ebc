import pytest
from hypothesis import given, strategies as st

from affine_orbits.affperm import (AffinePermutation, DecoratedMonomial, Membership,
                                   classify_membership, format_cycles, from_monomial,
                                   parse_cycles, perm_from_cycles)
from affine_orbits.coeff import EXACT
from affine_orbits.errors import DimensionMismatch, NotMonomial
from affine_orbits.laurent import LaurentSeries
from affine_orbits.linalg import SeriesMatrix

P = LaurentSeries.parse


@st.composite
def affine(draw, n=None):
    if n is None:
        n = draw(st.integers(1, 6))
    bar = tuple(p + 1 for p in draw(st.permutations(range(n))))
    shifts = tuple(draw(st.lists(st.integers(-4, 4), min_size=n, max_size=n)))
    return AffinePermutation(bar, shifts)


@st.composite
def affine_pair(draw):
    n = draw(st.integers(1, 5))
    return draw(affine(n)), draw(affine(n))


def sym_monomial(exps_by_cycle, perm):
    return DecoratedMonomial(perm, exps_by_cycle, (EXACT.one,) * len(perm), EXACT)


def test_compose_with_inverse_is_identity():
    x = AffinePermutation.parse("(1 3 2) ; 2,-1,0")
    assert x.compose(x.inverse()) == AffinePermutation.identity(3)


def test_star_involution():
    x = AffinePermutation.parse("(1 2) ; 3,-5")
    assert x.star().star() == x
    assert x.star().shifts == (-3, 5)


def test_compose_small_example():
    a = AffinePermutation((2, 1), (1, 0))
    b = AffinePermutation((2, 1), (0, 0))
    assert a.compose(b) == AffinePermutation((1, 2), (0, 1))


def test_compose_matches_integer_action():
    a = AffinePermutation.parse("(1 2 3) ; 1,0,-2")
    b = AffinePermutation.parse("(2 3) ; 0,4,1")
    ab = a.compose(b)
    for i in range(-6, 7):
        assert ab(i) == a(b(i))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        AffinePermutation.identity(2).compose(AffinePermutation.identity(3))


def test_six_by_six_matrix():
    w = AffinePermutation.parse("(1 2 3)(4 6) ; 1,-1,2,0,-2,3")
    expected = [
        ["0", "0", "t^2", "0", "0", "0"],
        ["t", "0", "0", "0", "0", "0"],
        ["0", "t^-1", "0", "0", "0", "0"],
        ["0", "0", "0", "0", "0", "t^3"],
        ["0", "0", "0", "0", "t^-2", "0"],
        ["0", "0", "0", "1", "0", "0"],
    ]
    assert w.to_matrix() == SeriesMatrix([[P(x) for x in r] for r in expected])


def test_identity_matrix():
    assert AffinePermutation.identity(4).to_matrix() == SeriesMatrix.identity(4)


def test_from_monomial_keeps_units_and_flags_purity():
    m = SeriesMatrix([[P("0"), P("i*t^2")], [P("i*t^2"), P("0")]])
    d = from_monomial(m)
    assert d.perm == (2, 1) and d.exps == (2, 2)
    assert d.units == (EXACT.i, EXACT.i)
    assert not d.is_pure
    with pytest.raises(NotMonomial):
        from_monomial(SeriesMatrix([[P("1"), P("1")], [P("0"), P("1")]]))
    with pytest.raises(NotMonomial):
        from_monomial(SeriesMatrix([[P("1+t"), P("0")], [P("0"), P("1")]]))


def test_definition_examples():
    perm = (1, 4, 3, 2, 5)
    second = sym_monomial((1, -2, -5, -2, 3), perm)
    third = sym_monomial((4, -2, -5, -2, 3), perm)
    s2, s3 = classify_membership(second), classify_membership(third)
    assert Membership.SymAPM in s2 and Membership.eSymAPM not in s2
    assert {Membership.SymAPM, Membership.eSymAPM} <= s3


def test_non_symmetric_example_is_rejected():
    # same support as the third example but different powers on the 2-cycle
    m = sym_monomial((4, -2, -5, 0, 3), (1, 4, 3, 2, 5))
    assert Membership.SymAPM not in classify_membership(m)


def test_skew_example():
    m = SeriesMatrix([[P(x) for x in r] for r in [
        ["0", "t^2", "0", "0"],
        ["-t^2", "0", "0", "0"],
        ["0", "0", "0", "t^-3"],
        ["0", "0", "-t^-3", "0"]]])
    assert classify_membership(from_monomial(m)) == {Membership.SkewAPM}


def test_isym_case_ii_example():
    i = EXACT.i
    m = DecoratedMonomial((2, 1, 4, 3, 5), (2, 2, -1, -1, -2), (i, i, i, i, EXACT.one), EXACT)
    assert Membership.iSymAPM_case_i in classify_membership(m)
    minus = DecoratedMonomial((2, 1), (2, -2), (i, i), EXACT)
    assert not classify_membership(minus) & {Membership.iSymAPM_case_i, Membership.iSymAPM_case_ii}
    pm = DecoratedMonomial((2, 1, 4, 3), (2, 2, -2, -2), (-i, -i, i, i), EXACT)
    assert Membership.iSymAPM_case_ii in classify_membership(pm)


def test_text_grammar():
    w = AffinePermutation.parse("(2 4) ; 4,-2,-5,-2,3")
    assert w.bar == (1, 4, 3, 2, 5) and w.shifts == (4, -2, -5, -2, 3)
    assert AffinePermutation.parse(str(w)) == w
    assert perm_from_cycles(parse_cycles("(1 2)(3 4)"), 5) == (2, 1, 4, 3, 5)
    assert format_cycles((2, 1, 4, 3, 5)) == "(1 2)(3 4)"
    assert AffinePermutation.from_json(w.to_json()) == w


def test_window_round_trip():
    w = AffinePermutation.parse("(1 2 3) ; 1,0,-2")
    assert AffinePermutation.from_window(w.window()) == w


@given(affine())
def test_inverse_and_star(x):
    assert x.compose(x.inverse()) == AffinePermutation.identity(x.n)
    assert x.star().star() == x


@given(affine_pair())
def test_to_matrix_is_a_homomorphism(pair):
    x, y = pair
    assert x.compose(y).to_matrix() == x.to_matrix() @ y.to_matrix()


@given(affine_pair())
def test_star_is_an_automorphism(pair):
    x, y = pair
    assert x.compose(y).star() == x.star().compose(y.star())


@given(affine())
def test_round_trip_through_matrix(x):
    d = from_monomial(x.to_matrix())
    assert d.is_pure and d.affine() == x


@given(affine())
def test_symapm_iff_star_is_inverse(x):
    d = DecoratedMonomial.from_affine(x)
    sym = Membership.SymAPM in classify_membership(d)
    assert sym == (x.star() == x.inverse())


@given(affine())
def test_containments(x):
    d = DecoratedMonomial.from_affine(x)
    s = classify_membership(d)
    if Membership.eSymAPM in s:
        assert Membership.SymAPM in s
    if Membership.SkewAPM in s:
        assert all(x.bar[j] != j + 1 for j in range(x.n))
