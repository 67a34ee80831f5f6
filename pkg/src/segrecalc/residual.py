"""Residual-product calculus.

The residual product of Segre classes is an operator series indexed by the
total codimension ``k``. Here such a series is a tuple of
:class:`GradedClass` values, entry ``k`` holding

    sum over i_1 + ... + i_n = k, all i_j >= 1, of
        multinomial(k; i_1, ..., i_n) * prod_j s_{i_j - rank E_j}(E_j)

which is a class of degree ``k - sum(rank E_j)`` on the common base.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .bundles import BundleData, chern_root_product, twist_chern
from .errors import BaseMismatch, EmptyList
from .graded import DimClass, GradedClass, binom, multinomial, poly_invert, poly_mul

OdotSeries = tuple  # tuple[GradedClass, ...] indexed by total codimension k


def tensored_segre(s: DimClass, l_c1: GradedClass, var: str = "h") -> DimClass:
    """Line-bundle twisted Segre class ``sum_i alpha^i / c(L)^(i+1)``.

    ``alpha^i`` is the codimension-``i`` piece of ``s`` in the ambient P^N,
    and ``l_c1`` the first Chern class of ``L`` as a multiple of ``h``.
    """
    n = s.ambient_dim
    if not isinstance(l_c1, GradedClass):
        l_c1 = GradedClass.constant(l_c1, n)
    inv = poly_invert(GradedClass.one(n) + l_c1)
    total = GradedClass.zero(n)
    power = inv
    for i, a in enumerate(s.by_codim()):
        if a:
            alpha = GradedClass({(i,): a}, (var,), n)
            total = total + poly_mul(alpha, power)
        power = poly_mul(power, inv)
    return DimClass.from_polynomial(total, n, var)


def _common_base(bundles: Sequence[BundleData]) -> int:
    dims = {b.base_dim for b in bundles}
    if len(dims) != 1:
        raise BaseMismatch(f"bundles live on bases of dimensions {sorted(dims)}")
    return dims.pop()


def segre_series(bundle: BundleData, trunc: int) -> OdotSeries:
    """Entry ``k`` is ``s_{k - rank}(E)`` for ``k >= 1``; entry 0 is zero."""
    s = bundle.segre()
    out = [GradedClass.zero(bundle.base_dim)]
    for k in range(1, trunc + 1):
        out.append(s.homogeneous(k - bundle.rank))
    return tuple(out)


def odot_combine(a: OdotSeries, b: OdotSeries, trunc: int) -> OdotSeries:
    """Binomial convolution ``{a . b}^k = sum_{i+j=k, i,j>=1} C(k,i) a^i b^j``."""
    base = a[0].truncation
    out = []
    for k in range(trunc + 1):
        acc = GradedClass.zero(base)
        for i in range(1, k):
            j = k - i
            if i < len(a) and j < len(b) and not a[i].is_zero() and not b[j].is_zero():
                acc = acc + poly_mul(a[i], b[j]) * binom(k, i)
        out.append(acc)
    return tuple(out)


def odot_pair(e: BundleData, f: BundleData, trunc: int) -> OdotSeries:
    """Residual product of two bundle Segre classes, entries ``k = 0..trunc``."""
    _common_base([e, f])
    return odot_combine(segre_series(e, trunc), segre_series(f, trunc), trunc)


def _compositions(k: int, n: int):
    """Ordered tuples of ``n`` positive integers summing to ``k``."""
    if n == 1:
        if k >= 1:
            yield (k,)
        return
    for first in range(1, k - n + 2):
        for rest in _compositions(k - first, n - 1):
            yield (first,) + rest


def odot_multi(bundles: Sequence[BundleData], trunc: int) -> OdotSeries:
    """Direct multinomial evaluation of the n-fold residual product."""
    if not bundles:
        raise EmptyList("residual product of an empty list")
    base = _common_base(bundles)
    segres = [(b.rank, b.segre()) for b in bundles]
    cache: dict[tuple[int, int], GradedClass] = {}

    def s(j, idx):
        key = (idx, j)
        if key not in cache:
            rank, full = segres[idx]
            cache[key] = full.homogeneous(j - rank)
        return cache[key]

    out = []
    for k in range(trunc + 1):
        acc = GradedClass.zero(base)
        for parts in _compositions(k, len(bundles)):
            term = GradedClass.constant(multinomial(parts), base)
            for idx, i in enumerate(parts):
                piece = s(i, idx)
                if piece.is_zero():
                    term = None
                    break
                term = poly_mul(term, piece)
            if term is not None:
                acc = acc + term
        out.append(acc)
    return tuple(out)


def odot_iterated(bundles: Sequence[BundleData], trunc: int) -> OdotSeries:
    """Left fold of pairwise residual products, the inductive form of the n-ary one."""
    if not bundles:
        raise EmptyList("residual product of an empty list")
    _common_base(bundles)
    acc = segre_series(bundles[0], trunc)
    for b in bundles[1:]:
        acc = odot_combine(acc, segre_series(b, trunc), trunc)
    return acc


def odot_total(series: OdotSeries) -> GradedClass:
    """Sum of all codimension pieces as one class on the base."""
    total = GradedClass.zero(series[0].truncation) if series else GradedClass.zero(0)
    for piece in series:
        total = total + piece
    return total


# Q-polynomial


def chern_variables(n: int) -> tuple[list[str], list[int]]:
    return [f"c{i}" for i in range(1, n + 1)], list(range(1, n + 1))


@dataclass(frozen=True)
class QPolynomial:
    """``Q`` with ``1/((1+E) prod(1+a_i+E)) = 1/prod(1+a_i) + Q * E``.

    ``value`` is expressed in Chern variables ``c1..cn`` (weights ``1..n``)
    and ``E``, or in root variables when built from explicit roots.
    ``truncation`` bounds the degree of ``Q * E``.
    """

    value: GradedClass
    n: int
    truncation: int
    exceptional: str = "E"
    roots: tuple = field(default=())
    bundle: BundleData | None = None

    def times_exceptional(self) -> GradedClass:
        return self.value.times_variable(self.exceptional)

    def reconstruction_holds(self) -> bool:
        """Check the defining expansion exactly up to ``truncation``."""
        if self.bundle is not None:
            lhs, chern = _bundle_side(self.bundle, self.truncation, self.exceptional)
        elif self.roots:
            lhs, chern = _root_side(list(self.roots), self.truncation, self.exceptional)
        else:
            lhs, chern = _chern_side(self.n, self.truncation, self.exceptional)
        return (lhs - poly_invert(chern) - self.times_exceptional()).is_zero()


def _root_side(roots: list[str], trunc: int, exc: str):
    e = GradedClass.variable(exc, trunc)
    a = [GradedClass.variable(r, trunc) for r in roots]
    denom = poly_mul(e + 1, chern_root_product([ai + e for ai in a], trunc))
    return poly_invert(denom), chern_root_product(a, trunc)


def _chern_side(n: int, trunc: int, exc: str):
    names, weights = chern_variables(n)
    terms = {tuple(0 for _ in names): 1}
    for i in range(n):
        mono = [0] * n
        mono[i] = 1
        terms[tuple(mono)] = 1
    chern = GradedClass(terms, names, trunc, weights)
    e = GradedClass.variable(exc, trunc)
    twisted = twist_chern(BundleData(n, chern, trunc), e).chern
    return poly_invert(poly_mul(e + 1, twisted)), chern


def _bundle_side(bundle: BundleData, trunc: int, exc: str):
    f = bundle.restrict(trunc)
    e = GradedClass.variable(exc, trunc)
    twisted = twist_chern(f, e).chern
    return poly_invert(poly_mul(e + 1, twisted)), f.chern


def _require_honest(bundle: BundleData):
    # Q is a polynomial in c_1..c_rank; higher classes of a formal bundle would be dropped
    BundleData(bundle.rank, bundle.chern, bundle.base_dim, strict=True)


def q_polynomial(roots, trunc: int, exceptional: str = "E") -> QPolynomial:
    """Build ``Q`` from a root count, explicit root names, or a bundle.

    * ``int n``: symmetric form in ``c1..cn`` (the Chern classes), via the
      twisting identity for ``c(F x O(E))``.
    * list of names: directly in the roots.
    * :class:`BundleData`: the Chern form with ``c_i`` replaced by the
      bundle's Chern classes.
    """
    if trunc < 1:
        raise ValueError("trunc must be at least 1")
    if isinstance(roots, BundleData):
        _require_honest(roots)
        trunc = min(trunc, roots.base_dim)
        if trunc < 1:
            raise ValueError("bundle base must have positive dimension")
        q = q_polynomial(roots.rank, trunc, exceptional)
        names, _ = chern_variables(roots.rank)
        mapping = {name: roots.chern_class(i + 1) for i, name in enumerate(names)}
        value = q.value.subs(mapping, trunc - 1)
        return QPolynomial(value, roots.rank, trunc, exceptional, bundle=roots)
    if isinstance(roots, int):
        full, chern = _chern_side(roots, trunc, exceptional)
        n, root_names = roots, ()
    else:
        root_names = tuple(roots)
        full, chern = _root_side(list(root_names), trunc, exceptional)
        n = len(root_names)
    diff = full - poly_invert(chern)
    return QPolynomial(diff.divide_by_variable(exceptional), n, trunc, exceptional, root_names)


@dataclass(frozen=True)
class PushforwardCheck:
    passed: bool
    lhs: GradedClass
    rhs: GradedClass
    first_discrepancy: int | None = None
    degrees_compared: int = 0

    def __bool__(self):
        return self.passed


def q_pushforward_check(f: BundleData, g: BundleData, trunc: int, exceptional: str = "E") -> PushforwardCheck:
    """Compare the formal pushforward of ``Q(c(F), E) E`` with ``-s(F) . s(G)``.

    The pushforward is the table rule ``E^i |-> (-1)^(i-1) s_{i - rank G}(G)``
    for ``i >= 1``. ``trunc`` bounds the total codimension ``k`` of the
    residual product, so the compared classes have degree at most
    ``trunc - rank F - rank G``.
    """
    _require_honest(f)
    base = _common_base([f, g])
    top = min(trunc - f.rank - g.rank, base)
    if top < 0:
        zero = GradedClass.zero(base)
        return PushforwardCheck(True, zero, zero, None, 0)

    # Q E is needed up to degree top + rank G, since E^i drops by rank G.
    q = q_polynomial(f.rank, top + g.rank + 1, exceptional)
    qe = q.times_exceptional()
    names, _ = chern_variables(f.rank)
    chern_map = {name: f.chern_class(i + 1) for i, name in enumerate(names)}
    g_segre = g.segre()
    lhs = GradedClass.zero(top)
    for power, coeff in qe.split_by(exceptional).items():
        if power == 0:
            if not coeff.is_zero():
                raise ValueError("Q*E has an E-free part")
            continue
        image = g_segre.homogeneous(power - g.rank)
        if image.is_zero():
            continue
        sign = -1 if power % 2 == 0 else 1
        lhs = lhs + poly_mul(coeff.subs(chern_map, top), image) * sign

    rhs = -odot_total(odot_pair(f, g, trunc))
    rhs = rhs.truncate(top) if rhs.truncation > top else rhs
    first = None
    for d in range(top + 1):
        if not (lhs.homogeneous(d) - rhs.homogeneous(d)).is_zero():
            first = d + f.rank + g.rank
            break
    return PushforwardCheck(first is None, lhs, rhs, first, top + 1)


# blowup correction class


@dataclass(frozen=True)
class GammaClass:
    """``Gamma' = c(N_sub) * zeta * E`` where ``c(N_quot x O(-E)) = c(N_quot) + zeta E``."""

    value: GradedClass
    zeta: GradedClass
    sub: BundleData
    quot: BundleData
    exceptional: str = "E"

    def divisible_by_exceptional(self) -> bool:
        return 0 not in self.value.split_by(self.exceptional)


def gamma_correction(n_sub: BundleData, n_quot: BundleData, trunc: int, exceptional: str = "E") -> GammaClass:
    if trunc < 1:
        raise ValueError("trunc must be at least 1")
    trunc = min(trunc, n_sub.base_dim, n_quot.base_dim)
    quot = n_quot.restrict(trunc)
    sub = n_sub.restrict(trunc)
    minus_e = -GradedClass.variable(exceptional, trunc)
    twisted = twist_chern(quot, minus_e)
    diff = twisted.chern - quot.chern
    zeta = diff.divide_by_variable(exceptional)
    value = poly_mul(sub.chern, zeta.times_variable(exceptional))
    return GammaClass(value, zeta, sub, quot, exceptional)


def lemma_difference(n_sub: BundleData, n_quot: BundleData, trunc: int, exceptional: str = "E") -> GradedClass:
    """``c(N_sub) c(N_quot x O(-E)) - c(N_sub) c(N_quot)``, computed without ``zeta``."""
    trunc = min(trunc, n_sub.base_dim, n_quot.base_dim)
    quot = n_quot.restrict(trunc)
    sub = n_sub.restrict(trunc)
    twisted = twist_chern(quot, -GradedClass.variable(exceptional, trunc))
    return poly_mul(sub.chern, twisted.chern) - poly_mul(sub.chern, quot.chern)

