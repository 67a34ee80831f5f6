"""Segre classes of unions of regularly embedded components.

All classes are pushed into the ambient P^N by :func:`regrade`, so a
component is described by its dimension, its degree, and its normal bundle
written as a polynomial in the hyperplane class ``h``. Linear subspaces have
degree 1 and normal bundle ``O(1)^{codim}``; :meth:`PairInput.linear` and
:meth:`MultiInput.linear` fill that in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .bundles import BundleData, hyperplane_sum, quotient_chern, whitney_chern
from .errors import (
    GradingMismatch,
    HypothesisNotDeclared,
    InvalidDimensions,
    RankInconsistency,
    TransversalityViolated,
)
from .graded import DimClass, GradedClass, binom, multinomial, poly_invert, poly_mul, regrade
from .residual import odot_multi, odot_pair, odot_total, tensored_segre


@dataclass(frozen=True)
class FormulaReport:
    formula_id: str
    result: DimClass
    breakdown: dict = field(default_factory=dict)  # name -> DimClass, summing to result
    hypothesis_checks: list = field(default_factory=list)  # (name, passed, "checked" | "trusted")
    cross_checks: list = field(default_factory=list)  # (name, agrees)

    def __post_init__(self):
        if self.breakdown:
            total = DimClass.zero(self.result.ambient_dim)
            for term in self.breakdown.values():
                total = total + term
            if total != self.result:
                raise ValueError("breakdown terms do not sum to the result")

    def with_cross_checks(self, checks) -> "FormulaReport":
        return FormulaReport(
            self.formula_id, self.result, self.breakdown, self.hypothesis_checks, list(self.cross_checks) + list(checks)
        )


@dataclass(frozen=True)
class PairInput:
    """Two components X, Y of P^N and the data on their intersection.

    ``n_xz`` lives on X (base dimension ``dim_x``), ``n_yz`` on Y. The three
    ``n_xy_*`` bundles live on X cap Y and are only needed for the blowup
    formula. ``dim_xy = -1`` encodes an empty intersection.
    """

    ambient_dim: int
    dim_x: int
    dim_y: int
    dim_xy: int
    n_xz: BundleData
    n_yz: BundleData
    n_xy_x: BundleData | None = None
    n_xy_y: BundleData | None = None
    n_xy_z: BundleData | None = None
    deg_x: Fraction = Fraction(1)
    deg_y: Fraction = Fraction(1)
    deg_xy: Fraction = Fraction(1)
    residual_after_blowup: bool = False

    def __post_init__(self):
        n = self.ambient_dim
        if not (self.dim_xy <= min(self.dim_x, self.dim_y) <= max(self.dim_x, self.dim_y) <= n):
            raise InvalidDimensions(
                f"need dim(X cap Y) <= min(dim X, dim Y) <= max <= dim Z, got "
                f"{self.dim_xy}, {self.dim_x}, {self.dim_y}, {n}"
            )
        if self.dim_xy < -1 or min(self.dim_x, self.dim_y) < 0:
            raise InvalidDimensions("component dimensions must be non-negative")
        if self.n_xz.rank != n - self.dim_x or self.n_yz.rank != n - self.dim_y:
            raise RankInconsistency("normal bundle ranks must equal the codimensions of X and Y")
        if self.n_xz.base_dim != self.dim_x or self.n_yz.base_dim != self.dim_y:
            raise InvalidDimensions("normal bundles must live on their components")
        if self.n_xy_z is not None and self.n_xy_z.rank != n - self.dim_xy:
            raise RankInconsistency(f"N(XY, Z) has rank {self.n_xy_z.rank}, expected {n - self.dim_xy}")

    @classmethod
    def linear(cls, n: int, m: int, k: int, l: int, residual_after_blowup: bool = True) -> "PairInput":
        """``X = P^m`` and ``Y = P^k`` meeting in ``P^l`` inside ``P^n``."""
        if not (-1 <= l <= min(m, k) and 0 <= min(m, k) and max(m, k) <= n):
            raise InvalidDimensions(f"P^{m} and P^{k} cannot meet in P^{l} inside P^{n}")
        if l >= 0:
            extra = dict(
                n_xy_x=hyperplane_sum(m - l, l),
                n_xy_y=hyperplane_sum(k - l, l),
                n_xy_z=hyperplane_sum(n - l, l),
            )
        else:
            extra = {}
        return cls(
            n, m, k, l, hyperplane_sum(n - m, m), hyperplane_sum(n - k, k),
            residual_after_blowup=residual_after_blowup, **extra,
        )

    @property
    def excess(self) -> int:
        """``dim Z + dim(X cap Y) - dim X - dim Y``; zero exactly when codimensions add."""
        return self.ambient_dim + self.dim_xy - self.dim_x - self.dim_y

    def swapped(self) -> "PairInput":
        return PairInput(
            self.ambient_dim, self.dim_y, self.dim_x, self.dim_xy, self.n_yz, self.n_xz,
            self.n_xy_y, self.n_xy_x, self.n_xy_z, self.deg_y, self.deg_x, self.deg_xy,
            self.residual_after_blowup,
        )

    def segre_x(self) -> DimClass:
        return regrade(self.n_xz.segre(), self.dim_x, self.ambient_dim, self.deg_x)

    def segre_y(self) -> DimClass:
        return regrade(self.n_yz.segre(), self.dim_y, self.ambient_dim, self.deg_y)


def transversality_holds(ambient_dim: int, dims: Sequence[int], dim_meet: int) -> bool:
    """Codimension count: codim of the intersection is the sum of codimensions."""
    if dim_meet < 0:
        return True
    return ambient_dim - dim_meet == sum(ambient_dim - d for d in dims)


def _series_bound(bundles: Sequence[BundleData]) -> int:
    return bundles[0].base_dim + sum(b.rank for b in bundles)


def union_transverse_pair(inp: PairInput) -> FormulaReport:
    """``s(W) = s(X) + s(Y) - s(N_X Z) . s(N_Y Z) cap [X cap Y]``."""
    n = inp.ambient_dim
    counted = transversality_holds(n, [inp.dim_x, inp.dim_y], inp.dim_xy)
    if not counted:
        raise TransversalityViolated(
            f"codim(X cap Y) = {n - inp.dim_xy} but codim X + codim Y = {2 * n - inp.dim_x - inp.dim_y}"
        )
    correction = DimClass.zero(n)
    if inp.dim_xy >= 0:
        e = inp.n_xz.restrict(inp.dim_xy)
        f = inp.n_yz.restrict(inp.dim_xy)
        series = odot_pair(e, f, _series_bound([e, f]))
        correction = -regrade(odot_total(series), inp.dim_xy, n, inp.deg_xy)
    sx, sy = inp.segre_x(), inp.segre_y()
    return FormulaReport(
        "thm1",
        sx + sy + correction,
        {"s(X,Z)": sx, "s(Y,Z)": sy, "correction": correction},
        [("transversality_codim_count", True, "checked"), ("normal_bundle_splitting", True, "trusted")],
    )


def _check_intersection_ranks(inp: PairInput):
    if inp.n_xy_x is None or inp.n_xy_y is None or inp.n_xy_z is None:
        raise RankInconsistency("blowup formula needs N(XY,X), N(XY,Y) and N(XY,Z)")
    expected = {
        "N(XY,X)": (inp.n_xy_x, inp.dim_x - inp.dim_xy),
        "N(XY,Y)": (inp.n_xy_y, inp.dim_y - inp.dim_xy),
        "N(XY,Z)": (inp.n_xy_z, inp.ambient_dim - inp.dim_xy),
    }
    for name, (bundle, rank) in expected.items():
        if bundle.rank != rank:
            raise RankInconsistency(f"{name} has rank {bundle.rank}, expected {rank}")
        if bundle.base_dim != inp.dim_xy:
            raise RankInconsistency(f"{name} must live on X cap Y (dimension {inp.dim_xy})")


def correction_factor(inp: PairInput) -> GradedClass:
    """``c(N_XY X) c(N_XY Y) / c(N_XY Z)`` on X cap Y.

    Its virtual rank ``-excess`` is negative whenever codimensions do not add,
    so it is kept as a bare class rather than a bundle.
    """
    split = whitney_chern(inp.n_xy_x, inp.n_xy_y)
    if split.rank >= inp.n_xy_z.rank:
        return quotient_chern(split, inp.n_xy_z).chern
    return poly_mul(split.chern, poly_invert(inp.n_xy_z.chern))


def union_blowup_residual(inp: PairInput) -> FormulaReport:
    """Union formula when the proper transform of X is residual to E in Bl_Y Z."""
    if not inp.residual_after_blowup:
        raise HypothesisNotDeclared("residual_after_blowup must be declared for the blowup formula")
    n = inp.ambient_dim
    correction = DimClass.zero(n)
    checks = [("residual_after_blowup", True, "trusted")]
    if inp.dim_xy >= 0:
        _check_intersection_ranks(inp)
        checks.append(("intersection_rank_consistency", True, "checked"))
        factor = correction_factor(inp)
        e, f = inp.n_xy_x, inp.n_xy_y
        series = odot_pair(e, f, _series_bound([e, f]))
        corr_class = poly_mul(factor, odot_total(series))
        correction = -regrade(corr_class, inp.dim_xy, n, inp.deg_xy)
    sx, sy = inp.segre_x(), inp.segre_y()
    return FormulaReport(
        "thm2",
        sx + sy + correction,
        {"s(X,Z)": sx, "s(Y,Z)": sy, "correction": correction},
        checks,
    )


def blowup_per_dimension(inp: PairInput) -> DimClass:
    """Per-dimension expansion of the blowup formula, term by term.

    For each dimension ``d`` this sums, over ``i + j = N - d``, the degree-``i``
    part of the correction factor times
    ``sum_{k+l=j-excess} multinomial(j-excess; k, l) s_{k-rk Y}(N_XY Y) s_{l-rk X}(N_XY X)``
    with ``k, l >= 0``. It never forms the residual-product series.
    """
    if not inp.residual_after_blowup:
        raise HypothesisNotDeclared("residual_after_blowup must be declared for the blowup formula")
    n = inp.ambient_dim
    sx, sy = inp.segre_x(), inp.segre_y()
    if inp.dim_xy < 0:
        return sx + sy
    _check_intersection_ranks(inp)
    factor = correction_factor(inp)
    rank_x = inp.dim_x - inp.dim_xy
    rank_y = inp.dim_y - inp.dim_xy
    s_nx = inp.n_xy_x.segre()
    s_ny = inp.n_xy_y.segre()
    h = inp.excess
    coeffs = [Fraction(0)] * (n + 1)
    for d in range(n + 1):
        target = inp.dim_xy - d  # degree of the class on X cap Y landing in dimension d
        if target < 0:
            continue
        total = Fraction(0)
        for i in range(n - d + 1):
            j = n - d - i
            f_i = factor.homogeneous(i)
            if f_i.is_zero() or j - h < 0:
                continue
            inner = GradedClass.zero(inp.dim_xy)
            for k in range(j - h + 1):
                l = j - h - k
                term = poly_mul(s_ny.homogeneous(k - rank_y), s_nx.homogeneous(l - rank_x))
                inner = inner + term * multinomial([k, l])
            total += poly_mul(f_i, inner).coefficient(h=target)
        coeffs[d] = -total * inp.deg_xy
    return sx + sy + DimClass(n, tuple(coeffs))


@dataclass(frozen=True)
class MultiInput:
    """Components with their full intersection lattice.

    ``meets`` maps each subset (frozenset of component indices, size >= 2) to
    ``(dim, degree, restricted)`` where ``restricted`` optionally overrides the
    restriction of component normal bundles to that intersection.
    """

    ambient_dim: int
    dims: tuple
    normals: tuple  # BundleData per component, living on the component
    degrees: tuple
    meets: Mapping

    @classmethod
    def linear(cls, n: int, dims: Sequence[int], meet_dims: Mapping) -> "MultiInput":
        meets = {frozenset(s): (d, Fraction(1), None) for s, d in meet_dims.items()}
        return cls(
            n, tuple(dims), tuple(hyperplane_sum(n - d, d) for d in dims), tuple(Fraction(1) for _ in dims), meets
        )

    def subset_data(self, subset: frozenset):
        if len(subset) == 1:
            (i,) = subset
            return self.dims[i], self.degrees[i], None
        if subset not in self.meets:
            raise InvalidDimensions(f"intersection data missing for components {sorted(subset)}")
        return self.meets[subset]


def union_transverse_multi(inp: MultiInput, names: Sequence[str] | None = None) -> FormulaReport:
    """Inclusion-exclusion over intersections with n-fold residual products."""
    n = inp.ambient_dim
    count = len(inp.dims)
    names = list(names) if names is not None else [f"Y{i + 1}" for i in range(count)]
    result = DimClass.zero(n)
    breakdown = {}
    for size in range(1, count + 1):
        layer = DimClass.zero(n)
        for subset in combinations(range(count), size):
            key = frozenset(subset)
            dim_s, deg_s, restricted = inp.subset_data(key)
            if dim_s < 0:
                continue
            if not transversality_holds(n, [inp.dims[i] for i in subset], dim_s):
                raise TransversalityViolated(
                    f"components {','.join(names[i] for i in subset)} meet in dimension {dim_s}, "
                    f"codimensions do not add"
                )
            bundles = [
                (restricted or {}).get(i) or inp.normals[i].restrict(dim_s)
                for i in subset
            ]
            series = odot_multi(bundles, _series_bound(bundles))
            layer = layer + regrade(odot_total(series), dim_s, n, deg_s)
        signed = layer if size % 2 == 1 else -layer
        breakdown[f"{size}-fold"] = signed
        result = result + signed
    return FormulaReport(
        "cor26", result, breakdown, [("transversality_codim_count", True, "checked"),
                                     ("normal_bundle_splitting", True, "trusted")]
    )


def fulton_residual(d_segre: DimClass, d_degree, r_segre: DimClass) -> DimClass:
    """Residual formula for ``W = D cup R`` with ``D`` a Cartier divisor of degree ``d_degree``.

    ``s(W)_m = s(D)_m + sum_{j=0}^{N-m} C(N-m, j) (-D)^j s(R)_{m+j}``.
    """
    if d_segre.ambient_dim != r_segre.ambient_dim:
        raise GradingMismatch(f"ambient dimensions differ: {d_segre.ambient_dim} vs {r_segre.ambient_dim}")
    n = d_segre.ambient_dim
    deg = Fraction(d_degree)
    out = []
    for m in range(n + 1):
        acc = d_segre[m]
        for j in range(n - m + 1):
            acc += binom(n - m, j) * (-deg) ** j * r_segre[m + j]
        out.append(acc)
    return DimClass(n, tuple(out))


def aluffi_residual(d_segre: DimClass, d_degree, r_segre: DimClass) -> DimClass:
    """Whole-class residual formula ``s(W) = s(D) + s(R)^{O(D)}``."""
    if d_segre.ambient_dim != r_segre.ambient_dim:
        raise GradingMismatch(f"ambient dimensions differ: {d_segre.ambient_dim} vs {r_segre.ambient_dim}")
    n = d_segre.ambient_dim
    l_c1 = GradedClass({(1,): Fraction(d_degree)}, ("h",), n)
    return d_segre + tensored_segre(r_segre, l_c1)


def divisor_segre(degree, ambient_dim: int) -> DimClass:
    """``dH / (1 + dH)`` via the graded inverse."""
    dh = GradedClass({(1,): Fraction(degree)}, ("h",), ambient_dim)
    return DimClass.from_polynomial(poly_mul(dh, poly_invert(dh + 1)), ambient_dim)


def union_fulton_pair(inp: PairInput) -> FormulaReport:
    """Residual formula applied with X as the divisor (X must have dimension N - 1)."""
    n = inp.ambient_dim
    if inp.dim_x != n - 1:
        raise InvalidDimensions("the residual formula needs X to be a divisor")
    sx, sy = inp.segre_x(), inp.segre_y()
    result = fulton_residual(sx, inp.deg_x, sy)
    return FormulaReport(
        "fulton",
        result,
        {"s(D,Z)": sx, "residual": result - sx},
        [("divisor_component", True, "checked")],
    )


@dataclass(frozen=True)
class ClosedFormResult:
    formula_value: Fraction
    closed_form_value: Fraction

    @property
    def agrees(self) -> bool:
        return self.formula_value == self.closed_form_value


def closed_form_expression(n: int, m: int, k: int, l: int, d: int) -> Fraction:
    """The closed-form coefficient of ``H^(n-d)`` for two linear spaces.

    Binomials follow ``C(a, b) = 0`` for ``a < 0``, ``b < 0`` or ``b > a``.
    Under that convention it disagrees with the blowup formula at some points,
    e.g. ``(3, 1, 1, 0, 0)`` gives -4 against -6.
    """
    total = Fraction((-1) ** (m - d) * binom(n - d - 1, m - 1) + (-1) ** (k - d) * binom(n - d - 1, k - 1))
    e = n - m - k + l
    for i in range(n - d + 1):
        j = n - d - i
        outer = (-1) ** i * binom(e + i - 1, e - 1)
        if not outer:
            continue
        top = j - e
        inner = 0
        for u in range(top + 1):
            v = top - u
            inner += (-1) ** (j - l) * binom(top, u) * binom(u - 1, m - l - 1) * binom(v - 1, k - l - 1)
        total += outer * inner
    return total


def linear_closed_form(n: int, m: int, k: int, l: int, d: int) -> ClosedFormResult:
    """Dimension-``d`` coefficient of ``s(P^m cup P^k, P^n)`` for ``P^m cap P^k = P^l``.

    The authoritative value comes from the blowup formula on linear data; the
    closed-form expression is evaluated alongside for comparison.
    """
    if not (0 <= l < min(m, k)):
        raise InvalidDimensions(f"need 0 <= l < min(m, k) (non-nested components), got l={l}, m={m}, k={k}")
    if max(m, k) >= n:
        raise InvalidDimensions(f"components must be proper subspaces of P^{n}")
    if m + k - l > n:
        raise InvalidDimensions(f"P^{m} and P^{k} meeting in P^{l} do not fit in P^{n}")
    if not 0 <= d <= max(m, k):
        raise InvalidDimensions(f"dimension {d} outside 0..{max(m, k)}")
    report = union_blowup_residual(PairInput.linear(n, m, k, l))
    return ClosedFormResult(report.result[d], closed_form_expression(n, m, k, l, d))
