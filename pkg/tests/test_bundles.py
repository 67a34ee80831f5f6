import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segrecalc.bundles import (
    BundleData,
    chern_root_product,
    hyperplane_sum,
    quotient_chern,
    segre_of_bundle,
    twist_chern,
    whitney_chern,
)
from segrecalc.errors import BaseMismatch, NotDegreeOne, RankUnderflow
from segrecalc.graded import GradedClass, poly_mul

from strategies import bundles, rationals


def test_segre_examples():
    assert segre_of_bundle(hyperplane_sum(2, 3)).coeffs() == [1, -2, 3, -4]
    assert segre_of_bundle(BundleData.trivial(3, 4)) == GradedClass.one(4)
    assert segre_of_bundle(hyperplane_sum(1, 2)).coeffs() == [1, -1, 1]


def test_segre_class_indexing():
    b = hyperplane_sum(1, 2)
    assert b.segre_class(-1).is_zero()
    assert b.segre_class(0) == GradedClass.one(2)
    assert b.segre_class(2).coefficient(h=2) == 1


def test_constructor_validation():
    with pytest.raises(ValueError):
        BundleData(1, GradedClass.from_coeffs([2, 1], "h", 2), 2)
    with pytest.raises(ValueError):
        BundleData(1, GradedClass.from_coeffs([1, 1, 1], "h", 2), 2, strict=True)
    assert BundleData(1, GradedClass.from_coeffs([1, 1, 1], "h", 3), 1).chern.truncation == 1


def test_whitney_examples():
    a = hyperplane_sum(1, 2)
    s = whitney_chern(a, a)
    assert s.rank == 2 and s.chern.coeffs() == [1, 2, 1]
    b = BundleData.from_coeffs(2, [1, 2], 2)
    s = whitney_chern(a, b)
    assert s.rank == 3 and s.chern.coeffs() == [1, 3, 2]
    assert whitney_chern(BundleData.trivial(2, 2), b).chern == b.chern
    with pytest.raises(BaseMismatch):
        whitney_chern(hyperplane_sum(1, 1), hyperplane_sum(1, 2))


def test_quotient_examples():
    q = quotient_chern(hyperplane_sum(2, 2), hyperplane_sum(1, 2))
    assert q.rank == 1 and q.chern.coeffs() == [1, 1, 0]
    t = hyperplane_sum(3, 2)
    assert quotient_chern(t, t).rank == 0 and quotient_chern(t, t).chern == GradedClass.one(2)
    q = quotient_chern(t, BundleData.from_coeffs(1, [1, 2], 2))
    assert q.rank == 2 and q.chern.coeffs() == [1, 1, 1]
    with pytest.raises(RankUnderflow):
        quotient_chern(hyperplane_sum(1, 2), hyperplane_sum(2, 2))


def test_twist_examples():
    a = GradedClass.variable("a", 3)
    t = GradedClass.variable("t", 3)
    line = BundleData(1, a + 1, 3)
    assert twist_chern(line, t).chern == a + t + 1
    assert twist_chern(line, GradedClass.zero(3)) == line


def test_twist_rank_two_symbolic():
    c1 = GradedClass.variable("c1", 2)
    c2 = GradedClass.variable("c2", 2, weight=2)
    t = GradedClass.variable("t", 2)
    out = twist_chern(BundleData(2, c1 + c2 + 1, 2), t).chern
    assert out == 1 + c1 + t * 2 + c2 + c1 * t + t * t


def test_twist_agrees_with_roots():
    hh = GradedClass.variable("h", 4)
    e = GradedClass.variable("E", 4)
    roots = [hh * 2, hh * -1, hh * 3]
    b = BundleData(3, chern_root_product(roots, 4), 4)
    assert twist_chern(b, -e).chern == chern_root_product([r - e for r in roots], 4)


def test_twist_rejects_non_linear():
    hh = GradedClass.variable("h", 3)
    with pytest.raises(NotDegreeOne):
        twist_chern(hyperplane_sum(1, 3), hh * hh)


@pytest.mark.parametrize("r", [0, 1, 2, 4])
def test_twist_of_trivial_is_power(r):
    t = GradedClass.variable("t", 5)
    assert twist_chern(BundleData.trivial(r, 5), t).chern == (t + 1) ** r


@given(bundles())
@settings(max_examples=200, deadline=None)
def test_chern_times_segre_is_one(b):
    assert poly_mul(b.chern, b.segre()) == GradedClass.one(b.base_dim)


@given(st.integers(0, 5).flatmap(lambda n: st.tuples(bundles(base_dim=n), bundles(base_dim=n))))
@settings(max_examples=100, deadline=None)
def test_quotient_then_sum_roundtrip(pair):
    total, sub = pair
    total = BundleData(total.rank + sub.rank, total.chern, total.base_dim)
    assert whitney_chern(quotient_chern(total, sub), sub).chern == total.chern


@given(bundles(), rationals)
@settings(max_examples=100, deadline=None)
def test_twist_roundtrip(b, a):
    t = GradedClass.variable("h", b.base_dim) * a
    assert twist_chern(twist_chern(b, t), -t).chern == b.chern
