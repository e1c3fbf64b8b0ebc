import random

import pytest
from hypothesis import given, settings, strategies as st

from affine_orbits.affperm import (AffinePermutation, Membership, classify_membership,
                                   compose_perms, invert_perm, perm_from_cycles)
from affine_orbits.coeff import APPROX, EXACT
from affine_orbits.enumerate import EnumSpec, IndexingSet, enum_indexing_set, fpf_involutions
from affine_orbits.errors import DimensionMismatch, NotFpfInvolution, NotSkew
from affine_orbits.laurent import LaurentSeries
from affine_orbits.linalg import (SeriesMatrix, membership, random_iwahori, random_matrix,
                                  random_symplectic, residual)
from affine_orbits.orbits_sp import (build_gw_Sp, build_h_sk, classify_Sp, reduce_skew,
                                     sigma_w, sign_swaps, sp_form, w_J)

P = LaurentSeries.parse
seeds = st.integers(0, 10**6)
GOLDEN = "(1 2)(3 4)(5 6) ; 1,1,-3,-3,2,2"
SKEW = [d.affine() for n in (2, 4) for d in enum_indexing_set(EnumSpec(n, 1, IndexingSet.SkewAPM))]


def M(rows):
    return SeriesMatrix([[P(x) for x in r] for r in rows])


def conj(sigma, x):
    return compose_perms(invert_perm(sigma), compose_perms(x, sigma))


def test_sp_form():
    assert sp_form(1) == M([["0", "1"], ["-1", "0"]])
    J = sp_form(3)
    assert J.T @ J == SeriesMatrix.identity(6)
    assert J.T == -J
    assert build_h_sk(AffinePermutation(w_J(3), (0,) * 6)).to_matrix() == J


def test_sigma_examples():
    assert sigma_w(w_J(3)) == tuple(range(1, 7))
    fpf = perm_from_cycles([(1, 2), (3, 4), (5, 6)], 6)
    sigma = sigma_w(fpf)
    assert sigma == perm_from_cycles([(2, 4), (3, 5)], 6)
    assert conj(sigma, w_J(3)) == fpf


def test_sigma_errors():
    with pytest.raises(NotFpfInvolution):
        sigma_w((1, 2))
    with pytest.raises(NotFpfInvolution):
        sigma_w((2, 3, 1))


@given(st.sampled_from(fpf_involutions(8)))
def test_sigma_conjugates_wj(fpf):
    assert conj(sigma_w(fpf), w_J(4)) == fpf


def test_golden_representative():
    w = AffinePermutation.parse(GOLDEN)
    g = build_gw_Sp(w)
    assert g == M([["t", "0", "0", "0", "0", "0"],
                   ["0", "0", "1", "0", "0", "0"],
                   ["0", "0", "0", "0", "t^2", "0"],
                   ["0", "1", "0", "0", "0", "0"],
                   ["0", "0", "0", "t^-3", "0", "0"],
                   ["0", "0", "0", "0", "0", "1"]])
    assert sign_swaps(w) == perm_from_cycles([(3, 4)], 6)
    h = build_h_sk(w).to_matrix()
    assert h == M([["0", "t", "0", "0", "0", "0"],
                   ["-t", "0", "0", "0", "0", "0"],
                   ["0", "0", "0", "t^-3", "0", "0"],
                   ["0", "0", "-t^-3", "0", "0", "0"],
                   ["0", "0", "0", "0", "0", "t^2"],
                   ["0", "0", "0", "0", "-t^2", "0"]])
    assert g.T @ sp_form(3) @ g == h
    assert classify_Sp(g).canon.w == w


def test_skew_example_membership():
    w = AffinePermutation.parse("(1 2)(3 4) ; 2,2,-3,-3")
    assert classify_membership(build_h_sk(w)) == {Membership.SkewAPM}


def test_errors():
    with pytest.raises(NotSkew):
        reduce_skew(SeriesMatrix.identity(2))
    with pytest.raises(DimensionMismatch):
        classify_Sp(SeriesMatrix.identity(3))
    with pytest.raises(NotFpfInvolution):
        build_gw_Sp(AffinePermutation.parse("(1 2) ; 1,2"))
    with pytest.raises(NotFpfInvolution):
        build_gw_Sp(AffinePermutation.parse("(1 2) ; 1,1,0"))


@pytest.mark.parametrize("w", SKEW, ids=str)
def test_round_trip(w):
    g = build_gw_Sp(w)
    J = sp_form(w.n // 2)
    assert g.T @ J @ g == build_h_sk(w).to_matrix()
    res = classify_Sp(g)
    assert res.canon.w == w
    assert membership(res.witness, "Iwahori")


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from(SKEW))
def test_planted_recovery(seed, w):
    rng = random.Random(seed)
    b = random_iwahori(w.n, rng, APPROX, height=2, terms=3, max_degree=2)
    h = b.T @ build_h_sk(w, APPROX).to_matrix() @ b
    res = reduce_skew(h)
    assert res.canon.w == w
    assert res.check(h).certifies(1e-8, max(w.shifts))


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from(SKEW))
def test_left_symplectic_right_iwahori(seed, w):
    rng = random.Random(seed)
    k = random_symplectic(w.n, rng)
    b = random_iwahori(w.n, rng, height=2, terms=2, max_degree=1)
    J = sp_form(w.n // 2)
    assert k.T @ J @ k == J
    g = k @ build_gw_Sp(w) @ b
    assert classify_Sp(g.to_field(APPROX)).canon.w == w


def test_exact_skew_reduction_keeps_zero_diagonal():
    rng = random.Random(3)
    w = AffinePermutation.parse(GOLDEN)
    b = random_iwahori(6, rng, EXACT, height=2, terms=2, max_degree=1)
    h = b.T @ build_h_sk(w).to_matrix() @ b
    res = reduce_skew(h)
    assert res.canon.w == w
    assert residual(res.witness.T @ h @ res.witness, res.canon.form.to_matrix()).ok(0)


def test_reduce_skew_on_canonical_inputs():
    J = sp_form(2)
    res = reduce_skew(J)
    assert res.canon.w == AffinePermutation(w_J(2), (0,) * 4)
    assert classify_Sp(SeriesMatrix.identity(4)).canon.w == res.canon.w
    h = M([["0", "t^2", "0", "0"],
           ["-t^2", "0", "0", "0"],
           ["0", "0", "0", "t^-3"],
           ["0", "0", "-t^-3", "0"]])
    res = reduce_skew(h)
    assert res.canon.form.to_matrix() == h
    assert res.witness == SeriesMatrix.identity(4)


def test_gw_of_wj_is_identity():
    assert build_gw_Sp(AffinePermutation(w_J(3), (0,) * 6)) == SeriesMatrix.identity(6)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_skew_closure(seed):
    g = random_matrix(4, random.Random(seed))
    assert (g.T @ sp_form(2) @ g).is_skew()


@pytest.mark.parametrize("n,count", [(1, 1), (2, 3), (3, 15), (4, 105), (5, 945)])
def test_sigma_exhaustive(n, count):
    fpfs = fpf_involutions(2 * n)
    assert len(fpfs) == count
    for fpf in fpfs:
        assert conj(sigma_w(fpf), w_J(n)) == fpf


@settings(max_examples=15, deadline=None)
@given(seeds, st.sampled_from(SKEW))
def test_sign_pattern_of_output(seed, w):
    rng = random.Random(seed)
    g = build_gw_Sp(w, APPROX) @ random_iwahori(w.n, rng, APPROX, height=2, terms=2,
                                                 max_degree=1)
    form = classify_Sp(g).canon.form
    for j in range(w.n):
        row = form.perm[j] - 1
        assert form.units[j] == (1 if row < j else -1)
