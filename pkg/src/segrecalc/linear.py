"""Linear subspaces of projective space and the blowup-pushforward oracle.

The oracle computes ``s(X cup Y, P^N)`` for a hyperplane X and a linear
space Y not contained in X directly on ``Bl_Y P^N``: there the product ideal
pulls back to a Cartier divisor of class ``h + e`` and the Segre class is the
pushforward of ``(h + e) / (1 + h + e)``. It uses only binomial Segre
coefficients of linear spaces and the exceptional-divisor pushforward rule,
never the union formulas it is meant to check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .errors import InvalidDimensions, OracleInapplicable
from .formulas import MultiInput, PairInput
from .graded import DimClass, GradedClass, binom


@dataclass(frozen=True)
class LinearScene:
    """Named linear subspaces of ``P^ambient`` with declared intersection dimensions.

    ``intersection_dims`` maps frozensets of names (size >= 2) to the
    dimension of the intersection, -1 when empty. Missing subsets are filled
    with the general-position value ``max(-1, sum(dims) - (|S|-1) N)`` capped
    by the smallest declared sub-intersection.
    """

    ambient: int
    components: tuple  # ((name, dim), ...)
    intersection_dims: Mapping = field(default_factory=dict)

    def __post_init__(self):
        names = [c[0] for c in self.components]
        if len(set(names)) != len(names):
            raise InvalidDimensions(f"duplicate component names {names}")
        for name, dim in self.components:
            if not 0 <= dim < self.ambient:
                raise InvalidDimensions(f"component {name} has dimension {dim} outside 0..{self.ambient - 1}")
        dims = dict(self.components)
        declared = {frozenset(k): v for k, v in self.intersection_dims.items()}
        for key in declared:
            if len(key) < 2 or not key <= set(names):
                raise InvalidDimensions(f"bad intersection key {sorted(key)}")
        full = {}
        for size in range(2, len(names) + 1):
            for subset in combinations(names, size):
                key = frozenset(subset)
                if size == 2:
                    bound = min(dims[x] for x in subset)
                else:
                    bound = min(full[key - {x}] for x in subset)
                if key in declared:
                    value = declared[key]
                else:
                    generic = sum(dims[x] for x in subset) - (size - 1) * self.ambient
                    value = max(-1, min(generic, bound))
                if value < -1 or value > bound:
                    raise InvalidDimensions(
                        f"intersection of {sorted(subset)} has dimension {value}, above its sub-intersections"
                    )
                if size == 2:
                    a, b = subset
                    if value < dims[a] + dims[b] - self.ambient:
                        raise InvalidDimensions(
                            f"{a} and {b} must meet in dimension at least {dims[a] + dims[b] - self.ambient}"
                        )
                full[key] = value
        object.__setattr__(self, "intersection_dims", full)

    @property
    def names(self) -> list[str]:
        return [c[0] for c in self.components]

    def dim(self, *names: str) -> int:
        if len(names) == 1:
            return dict(self.components)[names[0]]
        return self.intersection_dims[frozenset(names)]

    def pair_input(self, x: str, y: str, residual_after_blowup: bool = True) -> PairInput:
        return PairInput.linear(self.ambient, self.dim(x), self.dim(y), self.dim(x, y), residual_after_blowup)

    def multi_input(self) -> MultiInput:
        names = self.names
        idx = {n: i for i, n in enumerate(names)}
        meets = {frozenset(idx[n] for n in key): d for key, d in self.intersection_dims.items()}
        return MultiInput.linear(self.ambient, [self.dim(n) for n in names], meets)


def segre_linear(l: int, n: int) -> DimClass:
    """``s(P^l, P^n) = (1+h)^{-(n-l)} cap [P^l]`` from the binomial series."""
    if not 0 <= l <= n:
        raise InvalidDimensions(f"need 0 <= l <= N, got l={l}, N={n}")
    r = n - l
    coeffs = [Fraction(0)] * (n + 1)
    for d in range(l + 1):
        k = l - d
        # coefficient of h^k in (1+h)^(-r) is (-1)^k C(r+k-1, k); r = 0 gives 1 only at k = 0
        c = (1 if k == 0 else 0) if r == 0 else (-1) ** k * binom(r + k - 1, k)
        coeffs[d] = Fraction(c)
    return DimClass(n, tuple(coeffs))


def segre_divisor(deg, n: int) -> DimClass:
    """``dH/(1+dH)``: the dimension ``n-k`` entry is ``(-1)^(k+1) d^k``."""
    deg = Fraction(deg)
    if deg < 1:
        raise InvalidDimensions("divisor degree must be at least 1")
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(1, n + 1):
        coeffs[n - k] = (-1) ** (k + 1) * deg**k
    return DimClass(n, tuple(coeffs))


def blowup_pushforward(p: GradedClass, center_dim: int, n: int, h: str = "h", e: str = "e") -> DimClass:
    """Push a polynomial in ``h`` and the exceptional class ``e`` from ``Bl_{P^l} P^n``.

    ``h^a e^b`` maps to ``h^a pi_*(e^b)`` with ``pi_*(e^0) = [P^n]`` and
    ``pi_*(e^b) = (-1)^(b+1) s(P^l, P^n)_{n-b}`` for ``b >= 1``.
    """
    extra = [v for v in p.used_variables() if v not in (h, e)]
    if extra:
        raise ValueError(f"unexpected variables {extra}")
    center = segre_linear(center_dim, n)
    coeffs = [Fraction(0)] * (n + 1)
    ih = p.variables.index(h) if h in p.variables else None
    ie = p.variables.index(e) if e in p.variables else None
    for mono, c in p.terms.items():
        a = mono[ih] if ih is not None else 0
        b = mono[ie] if ie is not None else 0
        if b == 0:
            dim = n - a
            value = c
        else:
            dim = n - b - a
            value = c * (-1) ** (b + 1) * center[n - b]
        if dim >= 0 and value:
            coeffs[dim] += value
    return DimClass(n, tuple(coeffs))


def oracle_union_pair(scene: LinearScene) -> DimClass:
    """``s(X cup Y)`` for a hyperplane X and linear Y not inside X, via the blowup along Y."""
    if len(scene.components) != 2:
        raise OracleInapplicable("the oracle handles exactly two components")
    (xa, da), (ya, dy) = scene.components
    n = scene.ambient
    if da != n - 1 and dy != n - 1:
        raise OracleInapplicable("the oracle needs a hyperplane component")
    if da != n - 1:
        (xa, da), (ya, dy) = (ya, dy), (xa, da)
    meet = scene.dim(xa, ya)
    if meet != dy - 1:
        raise OracleInapplicable(f"{ya} must not lie in the hyperplane {xa}")
    return oracle_hyperplane_union(n, dy)


def oracle_hyperplane_union(n: int, center_dim: int) -> DimClass:
    """Pushforward of ``sum_k (-1)^(k+1) (h + e)^k`` from the blowup along ``P^center_dim``."""
    if not 0 <= center_dim < n:
        raise OracleInapplicable(f"center dimension {center_dim} outside 0..{n - 1}")
    divisor = GradedClass({(1, 0): 1, (0, 1): 1}, ("h", "e"), n)
    total = GradedClass.zero(n)
    power = GradedClass.one(n)
    for k in range(1, n + 1):
        power = power * divisor
        total = total + power * ((-1) ** (k + 1))
    return blowup_pushforward(total, center_dim, n)
