"""Randomized identity suite: every formula checked against an independent path.

Each check draws its cases from ``random.Random(seed)`` mixed with the check
name, so results depend only on the configuration. All comparisons are exact.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .bundles import BundleData, chern_root_product, quotient_chern, twist_chern, whitney_chern
from .formulas import (
    MultiInput,
    PairInput,
    aluffi_residual,
    blowup_per_dimension,
    fulton_residual,
    union_blowup_residual,
    union_fulton_pair,
    union_transverse_multi,
    union_transverse_pair,
)
from .graded import DimClass, GradedClass, poly_mul
from .linear import LinearScene, oracle_hyperplane_union, segre_divisor, segre_linear
from .residual import (
    chern_variables,
    gamma_correction,
    lemma_difference,
    odot_iterated,
    odot_multi,
    odot_pair,
    q_polynomial,
    q_pushforward_check,
)


@dataclass(frozen=True)
class SuiteConfig:
    trunc: int = 6
    seed: int = 0
    cases: int = 200


@dataclass
class CheckResult:
    name: str
    scenes_run: int = 0
    agreements: int = 0
    counterexample: str | None = None
    warnings: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.counterexample is None and self.agreements == self.scenes_run


@dataclass
class SuiteReport:
    checks: list
    config: SuiteConfig
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def summary(self) -> str:
        width = max(len(c.name) for c in self.checks)
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            line = f"{status}  {c.name.ljust(width)}  {c.agreements}/{c.scenes_run}"
            if c.counterexample:
                line += f"  counterexample: {c.counterexample}"
            for w in c.warnings:
                line += f"  warning: {w}"
            lines.append(line)
        lines.append(f"{'PASS' if self.passed else 'FAIL'}  overall ({self.seconds:.2f} s)")
        return "\n".join(lines)


# random data


def _rational(rng: random.Random, bound: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 3))


def _bundle(rng: random.Random, base_dim: int, rank: int | None = None) -> BundleData:
    rank = rng.randint(1, 3) if rank is None else rank
    coeffs = [1] + [_rational(rng) for _ in range(base_dim)]
    return BundleData.from_coeffs(rank, coeffs, base_dim)


def _honest_bundle(rng: random.Random, base_dim: int, rank: int) -> BundleData:
    coeffs = [1] + [_rational(rng) if k <= rank else 0 for k in range(1, base_dim + 1)]
    return BundleData.from_coeffs(rank, coeffs, base_dim)


def _integral_bundle(rng: random.Random, base_dim: int, rank: int) -> BundleData:
    coeffs = [1] + [rng.randint(-3, 3) for _ in range(base_dim)]
    return BundleData.from_coeffs(rank, coeffs, base_dim)


def _transverse_pair(rng: random.Random, n: int) -> PairInput:
    """Two components with arbitrary normal bundles meeting in the expected dimension."""
    dx = rng.randint(0, n - 1)
    dy = rng.randint(max(0, n - 1 - dx) if rng.random() < 0.7 else 0, n - 1)
    meet = dx + dy - n
    nx = _integral_bundle(rng, dx, n - dx)
    ny = _integral_bundle(rng, dy, n - dy)
    deg_x, deg_y = rng.randint(1, 3), rng.randint(1, 3)
    if meet < 0:
        return PairInput(n, dx, dy, -1, nx, ny, deg_x=deg_x, deg_y=deg_y)
    return PairInput(n, dx, dy, meet, nx, ny, deg_x=deg_x, deg_y=deg_y, deg_xy=deg_x * deg_y)


def _linear_pair(rng: random.Random, n: int) -> tuple[int, int, int]:
    """Dimensions of two distinct linear spaces, neither containing the other."""
    while True:
        m, k = rng.randint(0, n - 1), rng.randint(0, n - 1)
        low = max(-1, m + k - n)
        high = min(m, k) - 1
        if low <= high:
            return m, k, rng.randint(low, high)


# checks; each returns None on agreement or a description of the disagreement


def _chern_segre(rng, t):
    b = _bundle(rng, rng.randint(0, t))
    if poly_mul(b.chern, b.segre()) != GradedClass.one(b.base_dim):
        return f"c*s != 1 for c = {b.chern}"


def _odot_symmetry(rng, t):
    base = rng.randint(0, t)
    e, f = _bundle(rng, base), _bundle(rng, base)
    k = base + e.rank + f.rank
    if odot_pair(e, f, k) != odot_pair(f, e, k):
        return f"E(c={e.chern}, r={e.rank}) . F(c={f.chern}, r={f.rank}) not symmetric"


def _odot_multi(rng, t):
    base = rng.randint(0, t)
    bundles = [_bundle(rng, base) for _ in range(rng.randint(1, 4))]
    k = base + sum(b.rank for b in bundles)
    if odot_multi(bundles, k) != odot_iterated(bundles, k):
        return "multi product differs from iterated pairs for " + ", ".join(
            f"(r={b.rank}, c={b.chern})" for b in bundles
        )


def _q_pushforward(rng, t, case):
    rf, rg = case % 3 + 1, (case // 3) % 3 + 1
    base = rng.randint(1, t)
    f, g = _honest_bundle(rng, base, rf), _bundle(rng, base, rg)
    check = q_pushforward_check(f, g, base + rf + rg)
    if not check:
        return f"ranks ({rf},{rg}), F={f.chern}, G={g.chern}: differs in codim {check.first_discrepancy}"


def _q_reconstruction(rng, t, case, cache):
    n = case % 4 + 1
    if n not in cache:
        chern_form = q_polynomial(n, t)
        roots = [f"a{i}" for i in range(1, n + 1)]
        root_form = q_polynomial(roots, t)
        # elementary symmetric substitution c_i -> e_i(roots)
        elem = chern_root_product([GradedClass.variable(r, t) for r in roots], t)
        names, _ = chern_variables(n)
        mapping = {name: elem.homogeneous(i + 1) for i, name in enumerate(names)}
        substituted = chern_form.value.subs(mapping, t - 1)
        ok = chern_form.reconstruction_holds() and root_form.reconstruction_holds()
        ok = ok and (substituted - root_form.value).is_zero()
        cache[n] = ok
    if not cache[n]:
        return f"Q reconstruction fails for n={n}"
    q = q_polynomial(_honest_bundle(rng, t, n), t)
    if not q.reconstruction_holds():
        return f"Q reconstruction fails for bundle c={q.bundle.chern}"


def _gamma(rng, t):
    base = rng.randint(1, t)
    sub = _bundle(rng, base, rng.randint(1, 3))
    roots = [rng.randint(-3, 3) for _ in range(rng.randint(1, 3))]
    h = GradedClass.variable("h", base)
    quot = BundleData(len(roots), chern_root_product([h * r for r in roots], base), base)
    gamma = gamma_correction(sub, quot, base)
    if not gamma.divisible_by_exceptional():
        return f"Gamma' not divisible by E for roots {roots}"
    e = GradedClass.variable("E", base)
    twisted = chern_root_product([h * r - e for r in roots], base)
    expected = poly_mul(sub.chern, twisted) - poly_mul(sub.chern, quot.chern)
    if (gamma.value - expected).is_zero() and (lemma_difference(sub, quot, base) - expected).is_zero():
        return None
    return f"c(sub)c(quot(-E)) != c(sub)c(quot) + Gamma' for roots {roots}"


def _thm1_symmetry(rng, t):
    inp = _transverse_pair(rng, rng.randint(1, t))
    a = union_transverse_pair(inp).result
    b = union_transverse_pair(inp.swapped()).result
    if a != b:
        return f"X<->Y asymmetry: {a} vs {b}"


def _leading_term(rng, t):
    inp = _transverse_pair(rng, rng.randint(1, t))
    res = union_transverse_pair(inp).result
    top = max(inp.dim_x, inp.dim_y)
    expected = (inp.deg_x if inp.dim_x == top else 0) + (inp.deg_y if inp.dim_y == top else 0)
    if res[top] != expected or any(res[d] for d in range(top + 1, inp.ambient_dim + 1)):
        return f"leading term of {res} is not {expected}[dim {top}]"


def _hyperplane_linear(rng, t):
    n = rng.randint(1, t)
    l = rng.randint(0, n - 1)
    return n, l, PairInput.linear(n, n - 1, l, l - 1)


def _fulton_specialization(rng, t):
    n, l, inp = _hyperplane_linear(rng, t)
    a = union_transverse_pair(inp).result
    b = fulton_residual(segre_divisor(1, n), 1, segre_linear(l, n))
    if a != b or union_fulton_pair(inp).result != b:
        return f"hyperplane and P^{l} in P^{n}: {a} vs {b}"


def _oracle(rng, t):
    n, l, inp = _hyperplane_linear(rng, t)
    a = union_transverse_pair(inp).result
    b = oracle_hyperplane_union(n, l)
    if a != b:
        return f"hyperplane and P^{l} in P^{n}: formula {a}, oracle {b}"


def _thm1_thm2(rng, t):
    n = rng.randint(1, t)
    m, k = rng.randint(0, n - 1), rng.randint(0, n - 1)
    inp = PairInput.linear(n, m, k, max(-1, m + k - n))
    a = union_transverse_pair(inp).result
    b = union_blowup_residual(inp).result
    if a != b:
        return f"P^{m}, P^{k} in P^{n}: thm1 {a}, thm2 {b}"


def _per_dimension(rng, t):
    n = rng.randint(2, max(2, t))
    m, k, l = _linear_pair(rng, n)
    inp = PairInput.linear(n, m, k, l)
    a = union_blowup_residual(inp).result
    b = blowup_per_dimension(inp)
    if a != b:
        return f"P^{m}, P^{k} meeting in P^{l} in P^{n}: {a} vs {b}"


def _divisor_degeneration(rng, t):
    n = rng.randint(1, t)
    count = rng.randint(1, n)
    scene = LinearScene(n, tuple((f"H{i}", n - 1) for i in range(count)))
    a = union_transverse_multi(scene.multi_input()).result
    if a != segre_divisor(count, n):
        return f"{count} hyperplanes in P^{n}: {a}"
    d1, d2 = rng.randint(1, 4), rng.randint(1, 4)
    if n >= 2:
        inp = PairInput(
            n, n - 1, n - 1, n - 2,
            BundleData.from_coeffs(1, [1, d1], n - 1), BundleData.from_coeffs(1, [1, d2], n - 1),
            deg_x=d1, deg_y=d2, deg_xy=d1 * d2,
        )
        b = union_transverse_pair(inp).result
        if b != segre_divisor(d1 + d2, n):
            return f"hypersurfaces of degrees {d1}, {d2} in P^{n}: {b}"


def _aluffi_fulton(rng, t):
    n = rng.randint(1, t)
    deg = rng.randint(1, 4)
    r = DimClass(n, tuple([_rational(rng) for _ in range(n)] + [Fraction(0)]))
    a = aluffi_residual(segre_divisor(deg, n), deg, r)
    b = fulton_residual(segre_divisor(deg, n), deg, r)
    if a != b:
        return f"degree {deg}, residual {r}: {a} vs {b}"


def _twist_roundtrip(rng, t):
    b = _bundle(rng, rng.randint(0, t))
    c = GradedClass.variable("h", b.base_dim) * _rational(rng)
    back = twist_chern(twist_chern(b, c), -c)
    if back.chern != b.chern:
        return f"twist by {c} and back changes {b.chern} to {back.chern}"


def _whitney_quotient(rng, t):
    base = rng.randint(0, t)
    a, b = _bundle(rng, base), _bundle(rng, base)
    back = quotient_chern(whitney_chern(a, b), b)
    if back.chern != a.chern or back.rank != a.rank:
        return f"(A+B)/B != A for A={a.chern}, B={b.chern}"


def _multi_pair(rng, t):
    inp = _transverse_pair(rng, rng.randint(1, t))
    meet = {} if inp.dim_xy < 0 else {0: inp.n_xz.restrict(inp.dim_xy), 1: inp.n_yz.restrict(inp.dim_xy)}
    multi = MultiInput(
        inp.ambient_dim, (inp.dim_x, inp.dim_y), (inp.n_xz, inp.n_yz), (inp.deg_x, inp.deg_y),
        {frozenset({0, 1}): (inp.dim_xy, inp.deg_xy, meet or None)},
    )
    a = union_transverse_multi(multi).result
    b = union_transverse_pair(inp).result
    if a != b:
        return f"n-fold formula with two components {a} vs pair formula {b}"


CHECKS = (
    ("chern_segre_inverse", _chern_segre),
    ("odot_symmetry", _odot_symmetry),
    ("odot_multi_vs_iterated", _odot_multi),
    ("q_pushforward", _q_pushforward),
    ("q_reconstruction", _q_reconstruction),
    ("gamma_divisibility", _gamma),
    ("thm1_symmetry", _thm1_symmetry),
    ("leading_term", _leading_term),
    ("fulton_specialization", _fulton_specialization),
    ("oracle_agreement", _oracle),
    ("thm1_vs_thm2_transverse", _thm1_thm2),
    ("thm2_per_dimension", _per_dimension),
    ("divisor_degeneration", _divisor_degeneration),
    ("aluffi_vs_fulton", _aluffi_fulton),
    ("twist_roundtrip", _twist_roundtrip),
    ("whitney_quotient_roundtrip", _whitney_quotient),
    ("multi_two_components_vs_pair", _multi_pair),
)

CHECK_NAMES = tuple(name for name, _ in CHECKS)


def _run_check(name, fn, config: SuiteConfig) -> CheckResult:
    result = CheckResult(name)
    if config.trunc < 1 or config.cases < 1:
        result.warnings.append("zero cases run")
        return result
    rng = random.Random(f"{config.seed}:{name}")
    cache: dict = {}
    for case in range(config.cases):
        if name == "q_pushforward":
            failure = fn(rng, config.trunc, case)
        elif name == "q_reconstruction":
            failure = fn(rng, config.trunc, case, cache)
        else:
            failure = fn(rng, config.trunc)
        result.scenes_run += 1
        if failure is None:
            result.agreements += 1
        elif result.counterexample is None:
            result.counterexample = failure
    return result


def run_identity_suite(trunc: int = 6, seed: int = 0, cases: int = 200, checks=None) -> SuiteReport:
    """Run the randomized battery; ``checks`` optionally restricts it by name."""
    config = SuiteConfig(trunc, seed, cases)
    start = time.perf_counter()
    selected = [(n, f) for n, f in CHECKS if checks is None or n in checks]
    results = [_run_check(name, fn, config) for name, fn in selected]
    return SuiteReport(results, config, time.perf_counter() - start)
