"""Truncated graded polynomials with exact rational coefficients.

Everything in the package is built on two value types:

* :class:`GradedClass` -- a sparse polynomial in named formal variables,
  each variable carrying a positive integer weight (its codimension), kept
  modulo all monomials of weighted degree above ``truncation``.
* :class:`DimClass` -- a cycle class in projective space ``P^N`` stored by
  dimension, entry ``d`` being the coefficient of ``h^(N-d)``.

Both are immutable. Coefficients are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .errors import DimensionOverflow, GradingMismatch, NonUnitConstantTerm

Monomial = tuple  # exponent vector aligned with GradedClass.variables


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero when ``n < 0``, ``k < 0`` or ``k > n``."""
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def gbinom(n: int, k: int) -> Fraction:
    """Generalized binomial ``n(n-1)...(n-k+1)/k!``, valid for negative ``n``.

    This is the coefficient of ``t^k`` in ``(1+t)^n``.
    """
    if k < 0:
        return Fraction(0)
    num = 1
    for i in range(k):
        num *= n - i
    return Fraction(num, factorial(k))


def multinomial(parts: Sequence[int]) -> int:
    if any(p < 0 for p in parts):
        return 0
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return out


class GradedClass:
    """Sparse truncated polynomial over Q.

    ``terms`` maps exponent tuples (aligned with ``variables``) to nonzero
    Fractions. Monomials whose weighted degree exceeds ``truncation`` are
    dropped on construction, so the stored form is always canonical.
    """

    __slots__ = ("variables", "weights", "terms", "truncation", "_index")

    def __init__(
        self,
        terms: Mapping[Monomial, object] | None = None,
        variables: Sequence[str] = (),
        truncation: int = 0,
        weights: Sequence[int] | None = None,
    ):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variables in {variables}")
        if weights is None:
            weights = (1,) * len(variables)
        weights = tuple(int(w) for w in weights)
        if len(weights) != len(variables) or any(w < 1 for w in weights):
            raise ValueError("weights must be positive, one per variable")
        if truncation < 0:
            raise ValueError("truncation must be non-negative")
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != len(variables):
                raise ValueError(f"exponent {mono} does not match {variables}")
            c = Fraction(c)
            if c and sum(e * w for e, w in zip(mono, weights)) <= truncation:
                clean[mono] = clean.get(mono, 0) + c
        self.variables = variables
        self.weights = weights
        self.terms = {m: c for m, c in clean.items() if c}
        self.truncation = truncation
        self._index = {v: i for i, v in enumerate(variables)}

    # constructors

    @classmethod
    def constant(cls, value, truncation: int) -> "GradedClass":
        return cls({(): value}, (), truncation)

    @classmethod
    def one(cls, truncation: int) -> "GradedClass":
        return cls.constant(1, truncation)

    @classmethod
    def zero(cls, truncation: int) -> "GradedClass":
        return cls({}, (), truncation)

    @classmethod
    def variable(cls, name: str, truncation: int, weight: int = 1) -> "GradedClass":
        return cls({(1,): 1}, (name,), truncation, (weight,))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, var: str = "h", truncation: int | None = None) -> "GradedClass":
        """Single-variable class ``sum coeffs[k] * var^k``."""
        coeffs = list(coeffs)
        if truncation is None:
            truncation = max(len(coeffs) - 1, 0)
        return cls({(k,): c for k, c in enumerate(coeffs)}, (var,), truncation)

    # inspection

    def degree_of(self, mono: Monomial) -> int:
        return sum(e * w for e, w in zip(mono, self.weights))

    def weight_of(self, var: str) -> int:
        return self.weights[self._index[var]]

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def max_degree(self) -> int:
        return max((self.degree_of(m) for m in self.terms), default=-1)

    def homogeneous(self, d: int) -> "GradedClass":
        """The weighted-degree ``d`` part (zero for ``d < 0``)."""
        return self._with_terms({m: c for m, c in self.terms.items() if self.degree_of(m) == d})

    def coefficient(self, **exps: int) -> Fraction:
        """Coefficient of a monomial given as keyword exponents, e.g. ``h=2``."""
        for v in exps:
            if v not in self._index and exps[v]:
                return Fraction(0)
        mono = tuple(exps.get(v, 0) for v in self.variables)
        return self.terms.get(mono, Fraction(0))

    def coeffs(self, var: str | None = None) -> list[Fraction]:
        """Dense coefficient list of a single-variable class, index = exponent."""
        used = self.used_variables()
        if var is None:
            if len(used) > 1:
                raise ValueError(f"class is not single-variable: {used}")
            var = used[0] if used else None
        elif any(v != var for v in used):
            raise ValueError(f"class involves variables other than {var}: {used}")
        w = 1 if var is None or var not in self._index else self.weight_of(var)
        out = [Fraction(0)] * (self.truncation // w + 1)
        for m, c in self.terms.items():
            e = m[self._index[var]] if var in self._index else 0
            out[e] += c
        return out

    def used_variables(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.variables) if any(m[i] for m in self.terms))

    # structural helpers

    def _with_terms(self, terms, truncation=None) -> "GradedClass":
        return GradedClass(terms, self.variables, self.truncation if truncation is None else truncation, self.weights)

    def truncate(self, truncation: int) -> "GradedClass":
        if truncation > self.truncation:
            raise ValueError(f"cannot raise truncation from {self.truncation} to {truncation}")
        return self._with_terms(self.terms, truncation)

    def extend_variables(self, variables: Sequence[str], weights: Sequence[int]) -> "GradedClass":
        """Re-express over a larger ordered variable list."""
        pos = {v: i for i, v in enumerate(variables)}
        for v, w in zip(self.variables, self.weights):
            if v not in pos:
                raise ValueError(f"variable {v} missing from target universe")
            if weights[pos[v]] != w:
                raise GradingMismatch(f"variable {v} has weight {w} and {weights[pos[v]]}")
        n = len(variables)
        terms = {}
        for m, c in self.terms.items():
            new = [0] * n
            for v, e in zip(self.variables, m):
                new[pos[v]] = e
            terms[tuple(new)] = c
        return GradedClass(terms, variables, self.truncation, weights)

    def _align(self, other: "GradedClass"):
        if other.variables == self.variables and other.weights == self.weights:
            return self, other
        variables = list(self.variables)
        weights = list(self.weights)
        for v, w in zip(other.variables, other.weights):
            if v in self._index:
                if self.weight_of(v) != w:
                    raise GradingMismatch(f"variable {v} has weights {self.weight_of(v)} and {w}")
            else:
                variables.append(v)
                weights.append(w)
        return self.extend_variables(variables, weights), other.extend_variables(variables, weights)

    def times_variable(self, var: str, weight: int = 1) -> "GradedClass":
        """Multiply by a single variable, raising the truncation by its weight.

        Plain multiplication keeps the smaller truncation; multiplying a class
        known modulo degree > t by a monomial of degree w yields a class known
        modulo degree > t + w, which is what this records.
        """
        a = self if var in self._index else self.extend_variables(self.variables + (var,), self.weights + (weight,))
        i = a._index[var]
        terms = {m[:i] + (m[i] + 1,) + m[i + 1 :]: c for m, c in a.terms.items()}
        return GradedClass(terms, a.variables, a.truncation + a.weight_of(var), a.weights)

    def divide_by_variable(self, var: str) -> "GradedClass":
        """Exact division by one factor of ``var``; every term must contain it."""
        if var not in self._index:
            if self.terms:
                raise ValueError(f"class is not divisible by {var}")
            return GradedClass.zero(max(self.truncation - 1, 0))
        i = self._index[var]
        terms = {}
        for m, c in self.terms.items():
            if m[i] == 0:
                raise ValueError(f"class is not divisible by {var}")
            terms[m[:i] + (m[i] - 1,) + m[i + 1 :]] = c
        return GradedClass(terms, self.variables, max(self.truncation - self.weight_of(var), 0), self.weights)

    def split_by(self, var: str) -> dict[int, "GradedClass"]:
        """Group as ``sum_e coeff_e * var^e``; returns ``{e: coeff_e}``."""
        if var not in self._index:
            return {0: self} if self.terms else {}
        i = self._index[var]
        groups: dict[int, dict] = {}
        for m, c in self.terms.items():
            groups.setdefault(m[i], {})[m[:i] + (0,) + m[i + 1 :]] = c
        return {e: self._with_terms(t) for e, t in sorted(groups.items())}

    def subs(self, mapping: Mapping[str, "GradedClass"], truncation: int | None = None) -> "GradedClass":
        """Substitute classes for variables (ring homomorphism on monomials)."""
        trunc = self.truncation if truncation is None else truncation
        keep = [v for v in self.variables if v not in mapping]
        keep_w = [self.weight_of(v) for v in keep]
        result = GradedClass.zero(trunc)
        power_cache: dict[tuple[str, int], GradedClass] = {}

        def power(v, e):
            key = (v, e)
            if key not in power_cache:
                p = GradedClass.one(trunc)
                for _ in range(e):
                    p = poly_mul(p, mapping[v])
                power_cache[key] = p
            return power_cache[key]

        for m, c in self.terms.items():
            term = GradedClass({tuple(m[self._index[v]] for v in keep): c}, keep, trunc, keep_w)
            for v, e in zip(self.variables, m):
                if v in mapping and e:
                    term = poly_mul(term, power(v, e))
            result = result + term
        return result

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, GradedClass):
            other = GradedClass.constant(other, self.truncation)
        a, b = self._align(other)
        terms = dict(a.terms)
        for m, c in b.terms.items():
            terms[m] = terms.get(m, 0) + c
        return GradedClass(terms, a.variables, min(a.truncation, b.truncation), a.weights)

    __radd__ = __add__

    def __neg__(self):
        return self._with_terms({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, GradedClass):
            other = GradedClass.constant(other, self.truncation)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GradedClass):
            return poly_mul(self, other)
        other = Fraction(other)
        return self._with_terms({m: c * other for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return poly_invert(self) ** (-n)
        out = GradedClass.one(self.truncation)
        for _ in range(n):
            out = poly_mul(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedClass):
            if isinstance(other, (int, Fraction)):
                other = GradedClass.constant(other, self.truncation)
            else:
                return NotImplemented
        try:
            a, b = self._align(other)
        except GradingMismatch:
            return False
        return a.truncation == b.truncation and a.terms == b.terms

    __hash__ = None

    def equal_up_to(self, other: "GradedClass", truncation: int) -> bool:
        return self.truncate(truncation) == other.truncate(truncation)

    def __repr__(self):
        return f"GradedClass({self}, trunc={self.truncation})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (self.degree_of(m), tuple(-e for e in m))):
            c = self.terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, m) if e)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def poly_mul(a: GradedClass, b: GradedClass) -> GradedClass:
    """Product over the union of the variable sets, truncated at the smaller truncation."""
    a, b = a._align(b)
    trunc = min(a.truncation, b.truncation)
    weights = a.weights
    bt = [(m, c, sum(e * w for e, w in zip(m, weights))) for m, c in b.terms.items()]
    out: dict = {}
    for ma, ca in a.terms.items():
        da = sum(e * w for e, w in zip(ma, weights))
        if da > trunc:
            continue
        for mb, cb, db in bt:
            if da + db > trunc:
                continue
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return GradedClass(out, a.variables, trunc, weights)


def poly_invert(a: GradedClass) -> GradedClass:
    """Multiplicative inverse of a class with constant term 1.

    Solved degree by degree: ``b_0 = 1`` and ``b_d = -sum_{j>=1} a_j b_{d-j}``.
    """
    if a.constant_term != 1:
        raise NonUnitConstantTerm(f"constant term is {a.constant_term}, expected 1")
    trunc = a.truncation
    parts = [a.homogeneous(d) for d in range(trunc + 1)]
    inv = [GradedClass.one(trunc)._align(a)[0]]
    for d in range(1, trunc + 1):
        acc = GradedClass.zero(trunc)
        for j in range(1, d + 1):
            if parts[j].terms and inv[d - j].terms:
                acc = acc + poly_mul(parts[j], inv[d - j])
        inv.append(-acc)
    out = inv[0]
    for p in inv[1:]:
        out = out + p
    return out.extend_variables(a.variables, a.weights) if out.variables != a.variables else out


@dataclass(frozen=True)
class DimClass:
    """Cycle class in P^N indexed by dimension.

    ``coeffs[d]`` is the coefficient of the dimension-``d`` class, i.e. of
    ``h^(ambient_dim - d)``.
    """

    ambient_dim: int
    coeffs: tuple

    def __post_init__(self):
        if self.ambient_dim < 0:
            raise ValueError("ambient_dim must be non-negative")
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != self.ambient_dim + 1:
            raise ValueError(f"expected {self.ambient_dim + 1} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, ambient_dim: int) -> "DimClass":
        return cls(ambient_dim, (0,) * (ambient_dim + 1))

    @classmethod
    def from_codims(cls, ambient_dim: int, by_codim: Sequence) -> "DimClass":
        """Build from coefficients of ``1, h, h^2, ...`` (missing entries are 0)."""
        coeffs = [Fraction(0)] * (ambient_dim + 1)
        for k, c in enumerate(by_codim):
            if c and k > ambient_dim:
                raise DimensionOverflow(f"codimension {k} exceeds ambient dimension {ambient_dim}")
            if k <= ambient_dim:
                coeffs[ambient_dim - k] = Fraction(c)
        return cls(ambient_dim, tuple(coeffs))

    @classmethod
    def from_polynomial(cls, p: GradedClass, ambient_dim: int, var: str = "h") -> "DimClass":
        return cls.from_codims(ambient_dim, p.coeffs(var))

    def to_polynomial(self, var: str = "h") -> GradedClass:
        return GradedClass.from_coeffs(self.by_codim(), var, self.ambient_dim)

    def by_codim(self) -> list[Fraction]:
        return list(reversed(self.coeffs))

    def __getitem__(self, d: int) -> Fraction:
        if 0 <= d <= self.ambient_dim:
            return self.coeffs[d]
        return Fraction(0)

    def _check(self, other: "DimClass"):
        if not isinstance(other, DimClass):
            raise TypeError(f"expected DimClass, got {type(other).__name__}")
        if other.ambient_dim != self.ambient_dim:
            raise GradingMismatch(f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}")

    def __add__(self, other: "DimClass") -> "DimClass":
        self._check(other)
        return DimClass(self.ambient_dim, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DimClass") -> "DimClass":
        self._check(other)
        return DimClass(self.ambient_dim, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "DimClass":
        return DimClass(self.ambient_dim, tuple(-a for a in self.coeffs))

    def scale(self, c) -> "DimClass":
        c = Fraction(c)
        return DimClass(self.ambient_dim, tuple(c * a for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def top_dimension(self) -> int:
        """Largest dimension with a nonzero coefficient, -1 for the zero class."""
        return max((d for d, c in enumerate(self.coeffs) if c), default=-1)

    def __str__(self):
        return str(self.to_polynomial("h")) if not self.is_zero() else "0"


def regrade(c: GradedClass, support_dim: int, ambient_dim: int, degree=1, var: str = "h") -> DimClass:
    """Push a class on a support of dimension ``support_dim`` into P^N.

    A codimension-``k`` term on the support becomes the dimension
    ``support_dim - k`` entry, scaled by the degree of the support.
    """
    if support_dim > ambient_dim:
        raise DimensionOverflow(f"support dimension {support_dim} exceeds ambient {ambient_dim}")
    coeffs = [Fraction(0)] * (ambient_dim + 1)
    if support_dim < 0:
        if not c.is_zero():
            raise DimensionOverflow("nonzero class on an empty support")
        return DimClass(ambient_dim, tuple(coeffs))
    for k, a in enumerate(c.coeffs(var)):
        if not a:
            continue
        if k > support_dim:
            raise DimensionOverflow(f"term of degree {k} on a support of dimension {support_dim}")
        coeffs[support_dim - k] += a * degree
    return DimClass(ambient_dim, tuple(coeffs))
