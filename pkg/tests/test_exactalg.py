import random

import pytest

from holopoisson.errors import ChartError, ParseError
from holopoisson.exactalg import (
    GQ,
    Chart,
    Poly,
    convert_chart,
    format_gq,
    is_conj_fixed,
    parse_gq,
    parse_poly,
)

from oracles import rand_poly


def C(n):
    return Chart.complex(n)


def R(n):
    return Chart.real(n)


# ----------------------------------------------------------------------
# scalars

def test_gq_arithmetic_and_division():
    a = GQ(1, 2)
    b = GQ(-3, 4)
    assert a + b == GQ(-2, 6)
    assert a * b == GQ(-3 - 8, 4 - 6)
    assert (a / b) * b == a
    with pytest.raises(ZeroDivisionError):
        a / GQ(0)


@pytest.mark.parametrize("text", ["3", "-1/2", "i", "-i", "3i", "-1/2i",
                                  "(1/2-3i)", "(2+i)", "(-1/2+3i)"])
def test_gq_parse_print_roundtrip(text):
    value = parse_gq(text)
    assert parse_gq(format_gq(value)) == value


def test_gq_canonical_strings():
    assert format_gq(GQ(0)) == "0"
    assert format_gq(GQ(2, 0)) == "2"
    assert format_gq(GQ(0, 1)) == "i"
    assert format_gq(GQ(0, -1)) == "-i"
    assert format_gq(GQ("1/2", -3)) == "(1/2-3i)"


# ----------------------------------------------------------------------
# polynomial arithmetic: worked examples

def test_additive_inverse():
    z1 = Poly.var(C(2), 0)
    assert (z1 + (-z1)).is_zero()


def test_difference_of_squares():
    c = C(1)
    z1, zb1 = Poly.var(c, 0), Poly.var(c, 1)
    assert (z1 + zb1) * (z1 - zb1) == z1 * z1 - zb1 * zb1


def test_scale_cancellation():
    c = C(2)
    z2 = Poly.var(c, 1)
    assert z2.scale(4).scale(GQ("1/4")) == z2


def test_diff_power_rule():
    c = C(2)
    z1, zb2 = Poly.var(c, 0), Poly.var(c, 3)
    assert (z1 * z1 * zb2).diff(0) == z1.scale(2) * zb2
    assert zb2.diff(0).is_zero()


def test_diff_real_chart():
    r = R(1)
    x1, y1 = Poly.var(r, 0), Poly.var(r, 1)
    assert (x1 * y1).diff(1) == x1


def test_diff_unknown_variable():
    with pytest.raises(ChartError):
        Poly.var(C(1), 0).diff(5)


def test_conj_examples():
    c = C(2)
    z1, zb1, zb2 = Poly.var(c, 0), Poly.var(c, 2), Poly.var(c, 3)
    assert z1.scale(GQ.i()).conj() == zb1.scale(GQ(0, -1))
    f = (Poly.var(c, 0) * zb2).scale(GQ(2, 1))
    assert f.conj().conj() == f
    assert (z1 + zb1).conj() == z1 + zb1


def test_conj_requires_complex_chart():
    with pytest.raises(ChartError):
        Poly.var(R(1), 0).conj()


def test_convert_chart_examples():
    c, r = C(1), R(1)
    z1 = Poly.var(c, 0)
    x1, y1 = Poly.var(r, 0), Poly.var(r, 1)
    assert convert_chart(z1, r) == x1 + y1.scale(GQ.i())
    assert convert_chart(x1 * x1 + y1 * y1, c) == z1 * Poly.var(c, 1)
    f = (z1 * Poly.var(c, 1)).scale(GQ("3/2"))
    assert convert_chart(convert_chart(f, r), c) == f


def test_convert_chart_dimension_mismatch():
    with pytest.raises(ChartError):
        convert_chart(Poly.var(C(2), 0), R(1))


# ----------------------------------------------------------------------
# properties

def test_ring_laws_random():
    rng = random.Random(101)
    for chart in (C(2), R(2)):
        for _ in range(40):
            f = rand_poly(rng, chart)
            g = rand_poly(rng, chart)
            h = rand_poly(rng, chart)
            assert (f + g) + h == f + (g + h)
            assert f * g == g * f
            assert (f * g) * h == f * (g * h)
            assert f * (g + h) == f * g + f * h


def test_diff_commutes():
    rng = random.Random(7)
    chart = C(2)
    for _ in range(30):
        f = rand_poly(rng, chart, deg=4)
        u, v = rng.randrange(4), rng.randrange(4)
        assert f.diff(u).diff(v) == f.diff(v).diff(u)


def test_conj_is_ring_involution():
    rng = random.Random(13)
    chart = C(2)
    for _ in range(30):
        f = rand_poly(rng, chart)
        g = rand_poly(rng, chart)
        assert (f * g).conj() == f.conj() * g.conj()
        assert f.conj().conj() == f


def test_conj_fixed_predicate():
    rng = random.Random(17)
    r = R(2)
    for _ in range(20):
        f = Poly(r, {e: GQ(c.re) for e, c in rand_poly(rng, r).terms.items()})
        g = Poly(r, {e: GQ(c.re) for e, c in rand_poly(rng, r).terms.items()})
        assert is_conj_fixed(f) and is_conj_fixed(g)
        assert is_conj_fixed(f + g) and is_conj_fixed(f * g)
    assert not is_conj_fixed(Poly.var(r, 0).scale(GQ.i()))


def test_convert_chart_is_ring_isomorphism():
    rng = random.Random(23)
    c, r = C(2), R(2)
    for _ in range(25):
        f = rand_poly(rng, c)
        g = rand_poly(rng, c)
        assert convert_chart(f * g, r) == convert_chart(f, r) * convert_chart(g, r)
        assert convert_chart(f + g, r) == convert_chart(f, r) + convert_chart(g, r)


def test_empty_chart_is_legal():
    c = C(0)
    one = Poly.one(c)
    assert (one * one) == one
    assert str(Poly.zero(c)) == "0"
    moved = convert_chart(Poly.const(c, GQ(3, 1)), R(0))
    assert moved.chart == R(0)
    assert convert_chart(moved, c) == Poly.const(c, GQ(3, 1))


def test_arithmetic_chart_mismatch():
    with pytest.raises(ChartError):
        Poly.var(C(1), 0) + Poly.var(C(2), 0)
    with pytest.raises(ChartError):
        Poly.var(C(1), 0) * Poly.var(R(1), 0)


def test_evaluate_at_rational_points():
    c = C(2)
    f = parse_poly("(1+i) z1^2 zb2 + 3", c)
    value = f.evaluate([GQ(2), GQ(0), GQ(0), GQ(0, 1)])
    # (1+i) * 4 * i + 3 = (-4+4i) + 3
    assert value == GQ(-1, 4)
    with pytest.raises(ChartError):
        f.evaluate([GQ(1)])


# ----------------------------------------------------------------------
# grammar

def test_parse_grammar_example():
    c = C(2)
    f = parse_poly("(-1/2+3i) z1^2 zb2", c)
    exps = (2, 0, 0, 1)
    assert f.terms == {exps: GQ("-1/2", 3)}


def test_parse_print_roundtrip_random():
    rng = random.Random(31)
    for chart in (C(2), R(3)):
        for _ in range(40):
            f = rand_poly(rng, chart, deg=3)
            assert parse_poly(str(f), chart) == f


def test_parse_rejects_garbage():
    c = C(1)
    for bad in ["", "z9", "x1", "z1^", "((2)", "z1 +"]:
        with pytest.raises(ParseError):
            parse_poly(bad, c)


def test_canonical_order_is_graded_lex():
    c = C(1)
    f = parse_poly("1 + z1^2 + z1 + zb1", c)
    assert str(f) == "z1^2 + z1 + zb1 + 1"
