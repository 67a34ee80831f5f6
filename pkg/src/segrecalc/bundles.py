"""Formal vector bundles: rank plus total Chern class.

Bundles are formal. Quotients and restrictions are manipulated as total
classes, so ``c_k`` may be nonzero for ``k > rank`` unless ``strict`` is set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BaseMismatch, NotDegreeOne, RankUnderflow
from .graded import GradedClass, gbinom, poly_invert, poly_mul


@dataclass(frozen=True)
class BundleData:
    rank: int
    chern: GradedClass
    base_dim: int
    strict: bool = False

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        if self.base_dim < 0:
            raise ValueError("base_dim must be non-negative")
        if self.chern.constant_term != 1:
            raise ValueError(f"total Chern class must have constant term 1, got {self.chern.constant_term}")
        if self.chern.truncation != self.base_dim:
            if self.chern.truncation < self.base_dim:
                raise ValueError(
                    f"Chern class known only to degree {self.chern.truncation}, base has dimension {self.base_dim}"
                )
            object.__setattr__(self, "chern", self.chern.truncate(self.base_dim))
        if self.strict:
            for k in range(self.rank + 1, self.base_dim + 1):
                if not self.chern.homogeneous(k).is_zero():
                    raise ValueError(f"c_{k} of a rank-{self.rank} bundle must vanish")

    @classmethod
    def trivial(cls, rank: int, base_dim: int) -> "BundleData":
        return cls(rank, GradedClass.one(base_dim), base_dim)

    @classmethod
    def from_coeffs(cls, rank: int, coeffs, base_dim: int, var: str = "h") -> "BundleData":
        """Bundle whose total Chern class is ``sum coeffs[k] var^k``, cut at ``base_dim``."""
        coeffs = list(coeffs)[: base_dim + 1]
        return cls(rank, GradedClass.from_coeffs(coeffs, var, base_dim), base_dim)

    def chern_class(self, k: int) -> GradedClass:
        """``c_k``, zero for ``k < 0``."""
        return self.chern.homogeneous(k)

    def segre(self) -> GradedClass:
        return segre_of_bundle(self)

    def segre_class(self, j: int) -> GradedClass:
        """``s_j``: zero for negative ``j``, 1 for ``j = 0``."""
        if j < 0:
            return GradedClass.zero(self.base_dim)
        return self.segre().homogeneous(j)

    def restrict(self, base_dim: int) -> "BundleData":
        """Restriction to a subvariety of dimension ``base_dim`` (pullback of h-classes)."""
        if base_dim > self.base_dim:
            raise BaseMismatch(f"cannot restrict from dimension {self.base_dim} up to {base_dim}")
        return BundleData(self.rank, self.chern.truncate(base_dim), base_dim, self.strict)


def hyperplane_sum(rank: int, base_dim: int, var: str = "h") -> BundleData:
    """``O(1)^{rank}`` restricted to a linear space of dimension ``base_dim``."""
    one_plus_h = GradedClass.from_coeffs([1, 1], var, base_dim)
    return BundleData(rank, one_plus_h**rank, base_dim)


def segre_of_bundle(bundle: BundleData) -> GradedClass:
    return poly_invert(bundle.chern)


def _check_base(a: BundleData, b: BundleData):
    if a.base_dim != b.base_dim:
        raise BaseMismatch(f"bundles live on bases of dimension {a.base_dim} and {b.base_dim}")


def whitney_chern(a: BundleData, b: BundleData) -> BundleData:
    """Direct sum."""
    _check_base(a, b)
    return BundleData(a.rank + b.rank, poly_mul(a.chern, b.chern), a.base_dim)


def quotient_chern(total: BundleData, sub: BundleData) -> BundleData:
    """Quotient bundle ``total / sub`` from ``0 -> sub -> total -> Q -> 0``."""
    _check_base(total, sub)
    if sub.rank > total.rank:
        raise RankUnderflow(f"subbundle rank {sub.rank} exceeds rank {total.rank}")
    return BundleData(total.rank - sub.rank, poly_mul(total.chern, poly_invert(sub.chern)), total.base_dim)


def twist_chern(bundle: BundleData, t: GradedClass) -> BundleData:
    """Tensor with a line bundle whose first Chern class is ``t``.

    Uses ``c(E x L) = sum_i c_i(E) (1 + t)^(rank - i)``, which agrees with the
    Chern-root expansion for honest bundles and extends it to formal ones.
    """
    if not isinstance(t, GradedClass):
        t = GradedClass.constant(t, bundle.base_dim)
    if any(t.degree_of(m) != 1 for m in t.terms):
        raise NotDegreeOne(f"twisting class {t} is not homogeneous of degree 1")
    trunc = bundle.base_dim
    if t.is_zero():
        return bundle
    powers = [GradedClass.one(trunc)]
    for _ in range(trunc):
        powers.append(poly_mul(powers[-1], t))
    out = GradedClass.zero(trunc)
    for i in range(trunc + 1):
        ci = bundle.chern_class(i)
        if ci.is_zero():
            continue
        # (1 + t)^(rank - i), cut at the degrees that can still survive
        factor = GradedClass.zero(trunc)
        for m in range(trunc - i + 1):
            g = gbinom(bundle.rank - i, m)
            if g:
                factor = factor + powers[m] * g
        out = out + poly_mul(ci, factor)
    return BundleData(bundle.rank, out.truncate(trunc) if out.truncation > trunc else out, trunc)


def chern_root_product(roots: list[GradedClass], trunc: int) -> GradedClass:
    """``prod (1 + a_i)`` for degree-one classes ``a_i``."""
    out = GradedClass.one(trunc)
    for a in roots:
        out = poly_mul(out, a + 1)
    return out

