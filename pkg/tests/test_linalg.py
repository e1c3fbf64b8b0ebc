import random

import pytest
from hypothesis import given, settings, strategies as st

from affine_orbits.affperm import AffinePermutation
from affine_orbits.coeff import APPROX
from affine_orbits.errors import DimensionMismatch
from affine_orbits.laurent import LaurentSeries
from affine_orbits.linalg import (MatrixClass, SeriesMatrix, congruence, membership,
                                  random_iwahori, random_matrix, random_orthogonal,
                                  random_symplectic, residual)
from affine_orbits.orbits_sp import sp_form

P = LaurentSeries.parse
seeds = st.integers(0, 10**6)


def M(rows):
    return SeriesMatrix([[P(x) if isinstance(x, str) else x for x in r] for r in rows])


def test_transpose_involution():
    x = M([["1+t", "t^-1"], ["2", "i*t"]])
    assert x.T.T == x


def test_transvection_inverse():
    a = SeriesMatrix.elementary(3, 1, 0, P("t"))
    b = SeriesMatrix.elementary(3, 1, 0, P("-t"))
    assert a @ b == SeriesMatrix.identity(3)


def test_antidiag_block_break():
    a = 3
    left = M([["i", "1"], [f"-i*t^{a}/2", f"t^{a}/2"]])
    right = M([["i", f"-i*t^{a}/2"], ["1", f"t^{a}/2"]])
    assert left @ right == SeriesMatrix.antidiag2(P(f"t^{a}"))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        SeriesMatrix.identity(2) @ SeriesMatrix.identity(3)
    with pytest.raises(DimensionMismatch):
        SeriesMatrix([[1, 2]])


def test_det_examples():
    assert SeriesMatrix.identity(4).det() == 1
    assert SeriesMatrix.diag([P("t^2"), P("t^-1")]).det() == P("t")


def test_det_of_six_by_six_affine_permutation():
    w = AffinePermutation.parse("(1 2 3)(4 6) ; 1,-1,2,0,-2,3")
    m = w.to_matrix()
    # (1 2 3) is even, (4 6) odd
    assert m.det() == P("-t^3")


def test_det_elimination_agrees_with_expansion():
    rng = random.Random(5)
    for _ in range(5):
        x = random_matrix(4, rng)
        assert x._det_elimination().agrees(x.det())


def test_congruence_examples():
    h = M([["t", "t"], ["t", "0"]])
    assert congruence(SeriesMatrix.identity(2), h) == h
    b = M([["1", "-t"], ["0", "1"]])
    # b^T h b by hand
    assert congruence(b, h) == M([["t", "t - t^2"], ["t - t^2", "-2*t^2 + t^3"]])


def test_membership_examples():
    good = M([["1", "1+t", "1 + t + t^2 + t^3 + O(t^4)"],
              ["0", "1+t^2", "t+t^3"],
              ["0", "0", "-1+t^2+t^4"]])
    assert membership(good, MatrixClass.Iwahori)
    bad = M([["1", "1+t", "1 + t + t^2 + t^3 + O(t^4)"],
             ["0", "1+t^2", "t+t^3"],
             ["0", "0", "t"]])
    assert bad.det().ord == 1
    assert not membership(bad, MatrixClass.Iwahori)
    one = SeriesMatrix.identity(3)
    for cls in MatrixClass:
        assert membership(one, cls) == (cls is not MatrixClass.Skew)


def test_opposite_iwahori():
    x = M([["1", "t"], ["1", "1"]])
    assert membership(x, MatrixClass.OppositeIwahori)
    assert not membership(x, MatrixClass.Iwahori)


def test_json_round_trip():
    x = M([["1+t", "t^-1"], ["2 + O(t^3)", "i*t"]])
    y = SeriesMatrix.from_json(x.to_json())
    assert y == x and y.precision == 3


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_right_action_law(seed):
    rng = random.Random(seed)
    h = random_matrix(3, rng)
    h = h + h.T
    b1, b2 = random_iwahori(3, rng), random_iwahori(3, rng)
    assert congruence(b2, congruence(b1, h)) == congruence(b1 @ b2, h)
    assert congruence(b1, h).is_symmetric()


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_det_multiplicative(seed):
    rng = random.Random(seed)
    x, y = random_matrix(3, rng), random_matrix(3, rng)
    assert (x @ y).det() == x.det() * y.det()


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(2, 4))
def test_iwahori_closed_under_product_and_inverse(seed, n):
    rng = random.Random(seed)
    a = random_iwahori(n, rng)
    b = random_iwahori(n, rng, det_one=True)
    assert membership(a, "Iwahori") and membership(b, "Iwahori")
    assert b.det() == 1
    assert membership(a @ b, "Iwahori")
    assert membership(b.inverse(), "Iwahori")


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(2, 4))
def test_iwahori_factorization(seed, n):
    rng = random.Random(seed)
    x = SeriesMatrix.diag([P(f"{rng.choice([1, 2, -3])} + {rng.randint(-2, 2)}*t")
                           for _ in range(n)])
    for i in range(n):
        for j in range(n):
            if i != j:
                m = 0 if i < j else 1
                x = x @ SeriesMatrix.elementary(n, i, j, P(f"{rng.randint(-3, 3)}*t^{m}"))
    assert membership(x, "Iwahori")


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(2, 4))
def test_random_orthogonal_and_symplectic(seed, n):
    rng = random.Random(seed)
    k = random_orthogonal(n, rng)
    assert k.T @ k == SeriesMatrix.identity(n)
    s = random_symplectic(2 * (n // 2 + 1), rng)
    J = sp_form(n // 2 + 1)
    assert s.T @ J @ s == J


def test_residual_on_approx_backend():
    a = SeriesMatrix.identity(2, APPROX)
    b = a.copy()
    b[0, 1] = LaurentSeries([1e-7], 3, 8, APPROX)
    r = residual(a, b)
    assert r.ok(1e-6) and not r.ok(1e-8)
    assert r.certifies(1e-6, 5) and not r.certifies(1e-8, 5)
    assert r.certifies(1e-8, 2)
    assert not r.certifies(1e-6, 9)
