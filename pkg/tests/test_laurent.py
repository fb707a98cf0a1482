import pytest
from hypothesis import given, strategies as st

from dimerpoly.errors import NonUnitInverse, NotDivisible, VarTableMismatch
from dimerpoly.laurent import LaurentPoly, equal_up_to_unit, parse

XY = ("x", "y")


def polys(vars=XY, max_terms=4):
    exps = st.tuples(*[st.integers(-3, 3) for _ in vars])
    return st.dictionaries(exps, st.integers(-4, 4), max_size=max_terms).map(
        lambda d: LaurentPoly(vars, d))


def test_parse_and_print_round_trip():
    p = parse("x^-1*y + 3 - 2*x*y^2", XY)
    assert p.coeff((-1, 1)) == 1
    assert p.coeff((0, 0)) == 3
    assert p.coeff((1, 2)) == -2
    assert parse(p.to_text(), XY) == p


def test_zero_terms_are_dropped():
    p = LaurentPoly(XY, {(1, 0): 2, (0, 1): 0})
    assert p.nterms() == 1
    assert (p - p).is_zero()


def test_exact_division():
    x, y = LaurentPoly.var(XY, "x"), LaurentPoly.var(XY, "y")
    a = (1 + x * y) * (x - y ** -1)
    assert a.exact_div(1 + x * y) == x - y ** -1
    with pytest.raises(NotDivisible):
        (1 + x).exact_div(1 + y)


def test_units():
    x = LaurentPoly.var(XY, "x")
    assert (-x ** 3).is_unit()
    assert (-x ** 3).inverse_unit() == -x ** -3
    with pytest.raises(NonUnitInverse):
        (1 + x).inverse_unit()


def test_equal_up_to_unit_reports_the_unit():
    p = parse("1 - t + t^2", ("t",))
    q = parse("-t^3 + t^4 - t^5", ("t",))
    assert equal_up_to_unit(q, p) == (True, -1, 3)
    assert not equal_up_to_unit(p, parse("1 + t", ("t",)))[0]
    with pytest.raises(VarTableMismatch):
        equal_up_to_unit(parse("x", XY), p)


def test_substitute_and_specialize():
    p = parse("1 + x*y", XY)
    t = parse("t", ("t",))
    assert p.substitute({"x": t, "y": -t}, target_vars=("t",)) == 1 - t ** 2
    assert p.specialize({"x": 2, "y": 3}).coeff((0, 0)) == 7


@given(polys(), polys(), polys())
def test_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(polys(), polys())
def test_division_undoes_multiplication(a, b):
    if b.is_zero():
        return
    assert (a * b).exact_div(b) == a


@given(polys())
def test_text_round_trip(a):
    assert parse(a.to_text(), XY) == a
