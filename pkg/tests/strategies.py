"""Shared hypothesis strategies."""

from fractions import Fraction

from hypothesis import strategies as st

from segrecalc.bundles import BundleData

rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def bundles(draw, base_dim=None, rank=None, honest=False):
    base = draw(st.integers(0, 6)) if base_dim is None else base_dim
    r = draw(st.integers(1, 3)) if rank is None else rank
    coeffs = [1] + [draw(rationals) if (not honest or k <= r) else 0 for k in range(1, base + 1)]
    return BundleData.from_coeffs(r, coeffs, base)


@st.composite
def bundle_lists(draw, min_size=1, max_size=4):
    base = draw(st.integers(0, 5))
    size = draw(st.integers(min_size, max_size))
    return [draw(bundles(base_dim=base)) for _ in range(size)]
