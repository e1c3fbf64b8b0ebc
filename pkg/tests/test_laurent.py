from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from affine_orbits.coeff import APPROX, EXACT, GaussianRational
from affine_orbits.errors import DivisionByZero, OddValuation, PrecisionExhausted
from affine_orbits.laurent import LaurentSeries, get_working_precision, working_precision

P = LaurentSeries.parse

coeff = st.builds(GaussianRational, st.integers(-5, 5), st.integers(-5, 5))


@st.composite
def series(draw, lo=-3, hi=3, nonzero=True, prec=True):
    val = draw(st.integers(lo, hi))
    cs = draw(st.lists(coeff, min_size=1, max_size=6))
    if nonzero:
        assume(cs[0])
    p = val + len(cs) + draw(st.integers(0, 3)) if prec else None
    return LaurentSeries(cs, val, p, EXACT)


def test_difference_of_squares():
    assert P("1+t") * P("1-t") == P("1 - t^2")


def test_additive_inverse_is_zero():
    s = P("t^2") + P("-t^2")
    assert s.is_zero


def test_order_is_additive_on_example():
    assert (P("t^-1 + 1") * P("t^3")).ord == 2


def test_geometric_series():
    g = P("1 - t").inv()
    n = get_working_precision()
    assert g.prec == n
    assert all(g.coefficient(k) == 1 for k in range(n))
    assert (g * P("1-t")).truncate(n) == 1


def test_inverse_of_monomial_is_exact():
    x = P("t^2").inv()
    assert x.is_exact and x == P("t^-2")


def test_inverse_multiplies_back():
    f = P("2*t^-1*(1+t)")
    g = f.inv()
    assert g.ord == 1
    assert g.lead == Fraction(1, 2)
    assert (f * g).agrees(LaurentSeries.one())


def test_inverse_of_zero():
    with pytest.raises(DivisionByZero):
        LaurentSeries.zero(prec=4).inv()


def test_sqrt_examples():
    assert P("t^2").sqrt() == P("t")
    with pytest.raises(OddValuation):
        P("t").sqrt()
    s = P("t-1").sqrt()
    assert s.coefficient(0) == EXACT.i
    assert s.coefficient(1) == GaussianRational(0, Fraction(-1, 2))
    assert s.coefficient(2) == GaussianRational(0, Fraction(-1, 8))
    assert (s * s).agrees(P("t-1"))


def test_sqrt_of_zero_to_precision():
    with pytest.raises(PrecisionExhausted):
        LaurentSeries.zero(prec=3).sqrt()


def test_working_precision_context():
    with working_precision(8):
        assert P("1-t").inv().prec == 8
    assert get_working_precision() == 32
    with pytest.raises(ValueError):
        with working_precision(0):
            pass


def test_precision_propagation_rules():
    f = LaurentSeries([1, 1], 0, 5)      # 1 + t + O(t^5)
    g = LaurentSeries([2], -1, 3)        # 2 t^-1 + O(t^3)
    assert (f + g).prec == 3
    assert (f * g).prec == min(5 + (-1), 3 + 0)


def test_text_and_json_round_trip():
    f = P("t^-2 - i*t/2 + O(t^4)")
    assert P(str(f)) == f
    assert str(P(str(f))) == str(f)
    assert LaurentSeries.from_json(f.to_json()) == f
    a = f.to_field(APPROX)
    assert a.coefficient(1) == pytest.approx(-0.5j)


def test_membership_in_power_series_and_units():
    assert P("1 + t").ord == 0
    assert P("t + t^2").ord >= 0
    assert P("t^-1 + 1").ord < 0


@given(series(), series())
def test_order_additive(f, g):
    assert (f * g).ord == f.ord + g.ord


@given(series(), series())
def test_precision_never_overstated(f, g):
    s = f + g
    assert s.prec <= min(f.prec, g.prec)
    m = f * g
    assert m.prec <= min(f.prec + g.ord, g.prec + f.ord)


@given(series())
def test_inverse_property(f):
    g = f.inv()
    assert g.ord == -f.ord
    assert (f * g).agrees(LaurentSeries.one())


@given(series())
def test_sqrt_iff_even_order(f):
    if f.ord % 2:
        with pytest.raises(OddValuation):
            f.sqrt()
        return
    sq = f * f
    s = sq.sqrt()
    assert (s * s).agrees(sq)
    assert s.ord == f.ord


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=5), st.integers(-2, 2))
def test_approx_sqrt_squares_back(cs, val):
    assume(abs(cs[0]) > 0.1)
    f = LaurentSeries([complex(c) for c in cs], 2 * val, 2 * val + 12, APPROX)
    s = f.sqrt()
    assert (s * s).agrees(f, 1e-9)
