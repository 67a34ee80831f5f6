from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segrecalc.errors import DimensionOverflow, GradingMismatch, NonUnitConstantTerm
from segrecalc.graded import (
    DimClass,
    GradedClass,
    binom,
    gbinom,
    multinomial,
    poly_invert,
    poly_mul,
    regrade,
)

from strategies import rationals


def h(trunc):
    return GradedClass.variable("h", trunc)


@st.composite
def unit_classes(draw, trunc=None):
    t = draw(st.integers(0, 7)) if trunc is None else trunc
    coeffs = [1] + [draw(rationals) for _ in range(t)]
    return GradedClass.from_coeffs(coeffs, "h", t)


@pytest.mark.parametrize(
    "n,k,expected",
    [(4, 2, 6), (0, 0, 1), (3, 4, 0), (-1, 0, 0), (-2, 1, 0), (5, -1, 0)],
)
def test_binom_vanishes_outside_range(n, k, expected):
    assert binom(n, k) == expected


@pytest.mark.parametrize("n,k,expected", [(-1, 3, -1), (-2, 2, 3), (3, 2, 3), (2, 3, 0), (Fraction(1, 2), 0, 1)])
def test_gbinom_matches_series_of_power(n, k, expected):
    assert gbinom(n, k) == expected


def test_multinomial():
    assert multinomial([1, 1, 1]) == 6
    assert multinomial([2, 1]) == 3
    assert multinomial([1, -1]) == 0


def test_truncation_drops_high_degree_terms():
    p = GradedClass.from_coeffs([1, 2, 3, 4], "h", 2)
    assert p.coeffs() == [1, 2, 3]
    assert (h(3) ** 4).is_zero()


def test_product_truncates_at_smaller_bound():
    a = GradedClass.from_coeffs([1, 1], "h", 5)
    b = GradedClass.from_coeffs([1, 1], "h", 2)
    assert (a * b).truncation == 2
    assert (a * b).coeffs() == [1, 2, 1]


def test_weighted_variables():
    c2 = GradedClass.variable("c2", 4, weight=2)
    p = (c2 + 1) ** 3
    assert p.coefficient(c2=2) == 3
    assert p.coefficient(c2=3) == 0  # degree 6 > 4
    with pytest.raises(GradingMismatch):
        _ = c2 + GradedClass.variable("c2", 4, weight=1)


def test_invert_one_plus_h_squared():
    inv = poly_invert(GradedClass.from_coeffs([1, 2, 1], "h", 3))
    assert inv.coeffs() == [1, -2, 3, -4]


def test_invert_requires_unit():
    with pytest.raises(NonUnitConstantTerm):
        poly_invert(GradedClass.from_coeffs([2, 1], "h", 3))


def test_negative_power_inverts():
    p = GradedClass.from_coeffs([1, 1], "h", 4)
    assert p**-1 == poly_invert(p)
    assert (p**-2).coeffs() == [1, -2, 3, -4, 5]


@given(unit_classes())
@settings(max_examples=200, deadline=None)
def test_inverse_property(p):
    assert poly_mul(p, poly_invert(p)) == GradedClass.one(p.truncation)


def test_multivariable_inverse():
    e = GradedClass.variable("E", 4)
    a = GradedClass.variable("a", 4)
    p = (a + 1) * (e + 1)
    assert poly_mul(p, poly_invert(p)) == GradedClass.one(4)


def test_times_and_divide_variable():
    e = GradedClass.variable("E", 3)
    p = GradedClass.from_coeffs([1, 2], "h", 3)
    q = p.times_variable("E")
    assert q.truncation == 4
    assert q.divide_by_variable("E") == p
    with pytest.raises(ValueError):
        (p + e).divide_by_variable("E")


def test_split_by_groups_powers():
    e = GradedClass.variable("E", 3)
    hh = h(3)
    p = e * hh + e * e * 2 + hh
    parts = p.split_by("E")
    assert set(parts) == {0, 1, 2}
    assert parts[2] == GradedClass.constant(2, 3)


def test_subs_is_ring_map():
    a = GradedClass.variable("a", 3)
    p = (a + 1) ** 2
    out = p.subs({"a": h(3) * 2})
    assert out.coeffs("h") == [1, 4, 4, 0]


def test_string_form():
    assert str(GradedClass.from_coeffs([1, -2, 3], "h", 2)) == "1 - 2*h + 3*h^2"
    assert str(GradedClass.zero(2)) == "0"


def test_dimclass_indexing():
    c = DimClass.from_codims(3, [0, 1, 0, -4])
    assert c[2] == 1 and c[0] == -4 and c[3] == 0
    assert c.top_dimension() == 2
    assert c.by_codim() == [0, 1, 0, -4]
    with pytest.raises(DimensionOverflow):
        DimClass.from_codims(2, [0, 0, 0, 1])


def test_dimclass_mismatch():
    with pytest.raises(GradingMismatch):
        DimClass.zero(2) + DimClass.zero(3)


def test_regrade_places_codim_on_support():
    # class 1 - 2h on a line (degree 1) in P^3 -> [line] - 2[pt]
    c = GradedClass.from_coeffs([1, -2], "h", 1)
    assert regrade(c, 1, 3) == DimClass(3, (-2, 1, 0, 0))
    assert regrade(c, 1, 3, degree=2) == DimClass(3, (-4, 2, 0, 0))
    assert regrade(GradedClass.zero(0), -1, 3).is_zero()
    with pytest.raises(DimensionOverflow):
        regrade(GradedClass.from_coeffs([1, 1, 1], "h", 2), 1, 3)
