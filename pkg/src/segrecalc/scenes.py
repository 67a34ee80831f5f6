"""Scene documents: parsing, validation, and formula dispatch.

A scene is a JSON document (``schema_version`` "1")::

    {
      "schema_version": "1",
      "ambient": {"kind": "projective_space", "dim": 3},
      "components": [
        {"name": "X", "kind": "linear", "dim": 2},
        {"name": "Q", "kind": "bundle_input", "dim": 2, "degree": 2, "normal_chern": [1, 2]}
      ],
      "intersections": {"Q,X": 1},
      "hypotheses": {"transverse": true, "residual_after_blowup": false},
      "request": {"formula": "auto", "max_codim": 3, "format": "json"}
    }

Intersection keys are comma-joined, sorted component names. A value is either
a dimension (-1 for empty) or an object with ``dim`` plus optional
``degree``, ``restricted`` (component name -> Chern coefficients of its
normal bundle restricted to the intersection) and ``normal_in`` (component
name or ``"ambient"`` -> Chern coefficients of the normal bundle of the
intersection in it). Chern coefficients are integers or ``"p/q"`` strings,
listed by degree starting with the constant 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .bundles import BundleData, hyperplane_sum, whitney_chern
from .errors import (
    HypothesisError,
    InvalidDimensions,
    NoApplicableFormula,
    SchemaError,
    SemanticError,
    TransversalityViolated,
)
from .formulas import (
    FormulaReport,
    MultiInput,
    PairInput,
    blowup_per_dimension,
    transversality_holds,
    union_blowup_residual,
    union_fulton_pair,
    union_transverse_multi,
    union_transverse_pair,
)
from .linear import LinearScene, oracle_union_pair, segre_divisor

SCHEMA_VERSION = "1"
FORMULAS = ("auto", "thm1", "thm2", "cor26", "fulton", "oracle")
FORMATS = ("json", "table")


@dataclass(frozen=True)
class Component:
    name: str
    kind: str  # "linear" | "bundle_input"
    dim: int
    degree: Fraction = Fraction(1)
    normal_chern: tuple | None = None


@dataclass(frozen=True)
class Intersection:
    dim: int
    degree: Fraction | None = None
    restricted: dict = field(default_factory=dict)
    normal_in: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Hypotheses:
    transverse: bool | None = None  # None: infer from the codimension count
    residual_after_blowup: bool = False


@dataclass(frozen=True)
class Request:
    formula: str = "auto"
    max_codim: int | None = None
    format: str = "json"


@dataclass(frozen=True)
class SceneDocument:
    schema_version: str
    ambient_dim: int
    components: tuple
    intersections: dict  # tuple of sorted names -> Intersection (size >= 2)
    hypotheses: Hypotheses = Hypotheses()
    request: Request = Request()

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.components]

    def component(self, name: str) -> Component:
        for c in self.components:
            if c.name == name:
                return c
        raise KeyError(name)

    def meet(self, names) -> Intersection:
        names = tuple(sorted(names))
        if len(names) == 1:
            c = self.component(names[0])
            return Intersection(c.dim, c.degree)
        return self.intersections[names]

    def all_linear(self) -> bool:
        return all(c.kind == "linear" for c in self.components)

    def transversality_counts(self) -> dict:
        """Codimension count per subset of size >= 2 with nonempty intersection."""
        out = {}
        for key, meet in self.intersections.items():
            if meet.dim >= 0:
                dims = [self.component(n).dim for n in key]
                out[key] = transversality_holds(self.ambient_dim, dims, meet.dim)
        return out


# parsing


def _expect(obj, kind, path):
    if not isinstance(obj, kind) or (kind is int and isinstance(obj, bool)):
        names = {dict: "object", list: "array", str: "string", int: "integer", bool: "boolean"}
        raise SchemaError(f"expected {names.get(kind, kind.__name__)}", path)
    return obj


def _fields(obj, path, allowed, required=()):
    _expect(obj, dict, path)
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"unknown field {key!r}", path)
    for key in required:
        if key not in obj:
            raise SchemaError(f"missing field {key!r}", path)
    return obj


def _rational(value, path) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SchemaError("coefficients must be integers or 'p/q' strings", path)
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"bad rational {value!r}", path) from None


def _coeff_list(value, path) -> tuple:
    _expect(value, list, path)
    coeffs = tuple(_rational(v, f"{path}[{i}]") for i, v in enumerate(value))
    if not coeffs or coeffs[0] != 1:
        raise SemanticError("a total Chern class must start with constant term 1", path)
    return coeffs


def parse_scene(text: str) -> SceneDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    return scene_from_dict(raw)


def scene_from_dict(raw) -> SceneDocument:
    _fields(
        raw, "$",
        {"schema_version", "ambient", "components", "intersections", "hypotheses", "request"},
        ("schema_version", "ambient", "components"),
    )
    version = raw["schema_version"]
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION!r}", "$.schema_version")

    amb = _fields(raw["ambient"], "$.ambient", {"kind", "dim"}, ("kind", "dim"))
    if amb["kind"] != "projective_space":
        raise SchemaError(f"unsupported ambient kind {amb['kind']!r}", "$.ambient.kind")
    n = _expect(amb["dim"], int, "$.ambient.dim")
    if n < 1:
        raise SemanticError("ambient dimension must be at least 1", "$.ambient.dim")

    components = []
    seen = set()
    for i, comp in enumerate(_expect(raw["components"], list, "$.components")):
        path = f"$.components[{i}]"
        _fields(comp, path, {"name", "kind", "dim", "degree", "normal_chern"}, ("name", "kind", "dim"))
        name = _expect(comp["name"], str, f"{path}.name")
        if not name or "," in name:
            raise SemanticError("component names must be nonempty and contain no commas", f"{path}.name")
        if name in seen:
            raise SemanticError(f"duplicate component name {name!r}", f"{path}.name")
        seen.add(name)
        kind = comp["kind"]
        dim = _expect(comp["dim"], int, f"{path}.dim")
        if not 0 <= dim < n:
            raise SemanticError(f"component dimension {dim} outside 0..{n - 1}", f"{path}.dim")
        if kind == "linear":
            for extra in ("degree", "normal_chern"):
                if extra in comp:
                    raise SchemaError(f"field {extra!r} is not allowed for linear components", path)
            components.append(Component(name, kind, dim))
        elif kind == "bundle_input":
            if "normal_chern" not in comp:
                raise SchemaError("missing field 'normal_chern'", path)
            degree = _rational(comp.get("degree", 1), f"{path}.degree")
            if degree <= 0:
                raise SemanticError("degree must be positive", f"{path}.degree")
            coeffs = _coeff_list(comp["normal_chern"], f"{path}.normal_chern")
            components.append(Component(name, kind, dim, degree, coeffs))
        else:
            raise SchemaError(f"unknown component kind {kind!r}", f"{path}.kind")
    if not components:
        raise SemanticError("a scene needs at least one component", "$.components")

    declared = {}
    for key, value in _expect(raw.get("intersections", {}), dict, "$.intersections").items():
        path = f"$.intersections[{key!r}]"
        names = key.split(",")
        for nm in names:
            if nm not in seen:
                raise SemanticError(f"intersection references undeclared component {nm!r}", path)
        if len(names) < 2:
            raise SemanticError("intersection keys need at least two components", path)
        if len(set(names)) != len(names):
            raise SemanticError("intersection key repeats a component", path)
        if names != sorted(names):
            raise SemanticError(f"intersection key must be sorted: {','.join(sorted(names))}", path)
        if isinstance(value, dict):
            _fields(value, path, {"dim", "degree", "restricted", "normal_in"}, ("dim",))
            dim = _expect(value["dim"], int, f"{path}.dim")
            degree = _rational(value["degree"], f"{path}.degree") if "degree" in value else None
            restricted = {}
            for nm, coeffs in _expect(value.get("restricted", {}), dict, f"{path}.restricted").items():
                if nm not in names:
                    raise SemanticError(f"restricted bundle of {nm!r}, which is not in this intersection", path)
                restricted[nm] = _coeff_list(coeffs, f"{path}.restricted.{nm}")
            normal_in = {}
            for nm, coeffs in _expect(value.get("normal_in", {}), dict, f"{path}.normal_in").items():
                if nm != "ambient" and nm not in names:
                    raise SemanticError(f"normal_in refers to {nm!r}, which is not in this intersection", path)
                normal_in[nm] = _coeff_list(coeffs, f"{path}.normal_in.{nm}")
            declared[tuple(names)] = Intersection(dim, degree, restricted, normal_in)
        else:
            declared[tuple(names)] = Intersection(_expect(value, int, path))

    intersections = _complete_lattice(n, components, declared)

    hyp = _fields(raw.get("hypotheses", {}), "$.hypotheses", {"transverse", "residual_after_blowup"})
    transverse = hyp.get("transverse")
    if transverse is not None:
        _expect(transverse, bool, "$.hypotheses.transverse")
    residual = _expect(hyp.get("residual_after_blowup", False), bool, "$.hypotheses.residual_after_blowup")

    req = _fields(raw.get("request", {}), "$.request", {"formula", "max_codim", "format"})
    formula = req.get("formula", "auto")
    if formula not in FORMULAS:
        raise SchemaError(f"unknown formula {formula!r}, expected one of {', '.join(FORMULAS)}", "$.request.formula")
    max_codim = req.get("max_codim")
    if max_codim is not None:
        _expect(max_codim, int, "$.request.max_codim")
        if max_codim < 0:
            raise SemanticError("max_codim must be non-negative", "$.request.max_codim")
    fmt = req.get("format", "json")
    if fmt not in FORMATS:
        raise SchemaError(f"unknown format {fmt!r}", "$.request.format")

    return SceneDocument(
        SCHEMA_VERSION, n, tuple(components), intersections,
        Hypotheses(transverse, residual), Request(formula, max_codim, fmt),
    )


def _complete_lattice(n, components, declared) -> dict:
    """Fill undeclared intersections with general-position dimensions; check monotonicity."""
    dims = {c.name: c.dim for c in components}
    names = sorted(dims)
    out = {}
    for size in range(2, len(names) + 1):
        for subset in combinations(names, size):
            if size == 2:
                bound = min(dims[x] for x in subset)
            else:
                bound = min(out[tuple(y for y in subset if y != x)].dim for x in subset)
            path = f"$.intersections[{','.join(subset)!r}]"
            if subset in declared:
                meet = declared[subset]
            else:
                generic = sum(dims[x] for x in subset) - (size - 1) * n
                meet = Intersection(max(-1, min(generic, bound)))
            if meet.dim < -1 or meet.dim > bound:
                raise SemanticError(
                    f"intersection dimension {meet.dim} must lie in -1..{bound} (monotone under inclusion)", path
                )
            if size == 2 and meet.dim < dims[subset[0]] + dims[subset[1]] - n:
                raise SemanticError(
                    f"components of dimensions {dims[subset[0]]} and {dims[subset[1]]} in P^{n} "
                    f"meet in dimension at least {dims[subset[0]] + dims[subset[1]] - n}",
                    path,
                )
            out[subset] = meet
    return out


# building formula inputs


def _bundle(rank, coeffs, base_dim) -> BundleData:
    return BundleData.from_coeffs(rank, coeffs, base_dim)


def component_normal(doc: SceneDocument, comp: Component) -> BundleData:
    rank = doc.ambient_dim - comp.dim
    if comp.kind == "linear":
        return hyperplane_sum(rank, comp.dim)
    return _bundle(rank, comp.normal_chern, comp.dim)


def _meet_degree(doc: SceneDocument, names) -> Fraction:
    meet = doc.meet(names)
    if meet.degree is not None:
        return meet.degree
    comps = [doc.component(n) for n in names]
    if all(c.kind == "linear" for c in comps):
        return Fraction(1)
    if transversality_holds(doc.ambient_dim, [c.dim for c in comps], meet.dim):
        out = Fraction(1)
        for c in comps:
            out *= c.degree
        return out
    raise SemanticError(
        f"intersection {','.join(sorted(names))} is not dimensionally transverse; declare its degree",
        f"$.intersections[{','.join(sorted(names))!r}]",
    )


def _restricted(doc: SceneDocument, names, name) -> BundleData:
    meet = doc.meet(names)
    comp = doc.component(name)
    rank = doc.ambient_dim - comp.dim
    if name in meet.restricted:
        return _bundle(rank, meet.restricted[name], meet.dim)
    return component_normal(doc, comp).restrict(meet.dim)


def pair_input(doc: SceneDocument, x: str, y: str) -> PairInput:
    cx, cy = doc.component(x), doc.component(y)
    meet = doc.meet((x, y))
    n = doc.ambient_dim
    extra = {}
    if meet.dim >= 0:
        given = meet.normal_in
        lin = cx.kind == "linear" and cy.kind == "linear"
        transverse = transversality_holds(n, [cx.dim, cy.dim], meet.dim)

        def normal(target, rank, fallback):
            if target in given:
                return _bundle(rank, given[target], meet.dim)
            if lin:
                return hyperplane_sum(rank, meet.dim)
            return fallback() if transverse else None

        nx = _restricted(doc, (x, y), x)
        ny = _restricted(doc, (x, y), y)
        extra = dict(
            n_xy_x=normal(x, cx.dim - meet.dim, lambda: ny),
            n_xy_y=normal(y, cy.dim - meet.dim, lambda: nx),
            n_xy_z=normal("ambient", n - meet.dim, lambda: whitney_chern(nx, ny)),
            deg_xy=_meet_degree(doc, (x, y)),
        )
    return PairInput(
        n, cx.dim, cy.dim, meet.dim, component_normal(doc, cx), component_normal(doc, cy),
        deg_x=cx.degree, deg_y=cy.degree, residual_after_blowup=doc.hypotheses.residual_after_blowup, **extra,
    )


def multi_input(doc: SceneDocument) -> MultiInput:
    names = doc.names
    idx = {nm: i for i, nm in enumerate(names)}
    meets = {}
    for key, meet in doc.intersections.items():
        if meet.dim < 0:
            meets[frozenset(idx[n] for n in key)] = (meet.dim, Fraction(1), None)
            continue
        restricted = {idx[n]: _restricted(doc, key, n) for n in key}
        meets[frozenset(idx[n] for n in key)] = (meet.dim, _meet_degree(doc, key), restricted)
    return MultiInput(
        doc.ambient_dim,
        tuple(c.dim for c in doc.components),
        tuple(component_normal(doc, c) for c in doc.components),
        tuple(c.degree for c in doc.components),
        meets,
    )


def linear_scene(doc: SceneDocument) -> LinearScene:
    if not doc.all_linear():
        raise InvalidDimensions("scene has non-linear components")
    return LinearScene(
        doc.ambient_dim,
        tuple((c.name, c.dim) for c in doc.components),
        {frozenset(k): m.dim for k, m in doc.intersections.items()},
    )


# dispatch


def _divisor_pair(doc: SceneDocument):
    """(divisor, other) names when the scene is a pair with a hypersurface component."""
    if len(doc.components) != 2:
        return None
    a, b = doc.components
    for d, r in ((a, b), (b, a)):
        if d.dim == doc.ambient_dim - 1:
            return d.name, r.name
    return None


def _oracle_applies(doc: SceneDocument) -> bool:
    if len(doc.components) != 2 or not doc.all_linear():
        return False
    pair = _divisor_pair(doc)
    if pair is None:
        return False
    d, r = pair
    return doc.meet((d, r)).dim == doc.component(r).dim - 1


def _run(doc: SceneDocument, formula: str) -> FormulaReport:
    n_comp = len(doc.components)
    counts = doc.transversality_counts()
    if formula in ("thm1", "cor26"):
        if doc.hypotheses.transverse is False:
            raise TransversalityViolated("scene declares the components non-transverse")
        bad = [k for k, ok in counts.items() if not ok]
        if bad:
            raise TransversalityViolated(
                f"codimensions do not add for {'; '.join(','.join(k) for k in bad)}"
            )
        if formula == "thm1":
            if n_comp != 2:
                raise NoApplicableFormula("thm1 needs exactly two components; use cor26")
            x, y = doc.names
            return union_transverse_pair(pair_input(doc, x, y))
        return union_transverse_multi(multi_input(doc), doc.names)
    if formula == "thm2":
        if n_comp != 2:
            raise NoApplicableFormula("the blowup formula is only available for two components")
        x, y = doc.names
        return union_blowup_residual(pair_input(doc, x, y))
    if formula == "fulton":
        pair = _divisor_pair(doc)
        if pair is None:
            raise NoApplicableFormula("the residual formula needs two components, one a hypersurface")
        return union_fulton_pair(pair_input(doc, *pair))
    if formula == "oracle":
        if not _oracle_applies(doc):
            raise NoApplicableFormula("the oracle needs a linear hyperplane and a linear space not inside it")
        result = oracle_union_pair(linear_scene(doc))
        return FormulaReport("oracle", result, {"pushforward": result}, [("hyperplane_and_linear", True, "checked")])
    raise NoApplicableFormula(f"unknown formula {formula!r}")


def choose_formula(doc: SceneDocument) -> str:
    counts = doc.transversality_counts()
    n_comp = len(doc.components)
    if all(counts.values()) and doc.hypotheses.transverse is not False:
        return "thm1" if n_comp == 2 else "cor26"
    if doc.hypotheses.transverse is True:
        bad = "; ".join(",".join(k) for k, ok in counts.items() if not ok)
        raise TransversalityViolated(f"scene declares transversality but codimensions do not add for {bad}")
    if doc.hypotheses.residual_after_blowup and n_comp == 2:
        return "thm2"
    if _divisor_pair(doc) is not None:
        return "fulton"
    raise NoApplicableFormula("no formula applies: components are not transverse, no blowup hypothesis is "
                              "declared, and no component is a hypersurface")


def _cross_candidates(doc: SceneDocument, chosen: str) -> list[str]:
    out = []
    counts = doc.transversality_counts()
    transverse = all(counts.values()) and doc.hypotheses.transverse is not False
    n_comp = len(doc.components)
    if transverse:
        out.append("cor26")
        if n_comp == 2:
            out.append("thm1")
    if n_comp == 2 and doc.hypotheses.residual_after_blowup:
        out.append("thm2")
    pair = _divisor_pair(doc)
    if pair is not None and doc.meet(pair).dim < doc.component(pair[1]).dim:
        out.append("fulton")
    if _oracle_applies(doc):
        out.append("oracle")
    return [f for f in out if f != chosen]


def dispatch_compute(doc: SceneDocument, formula: str | None = None) -> FormulaReport:
    """Run the requested (or automatically chosen) formula and cross-check it.

    Every other formula whose hypotheses hold is evaluated and compared; the
    oracle is included whenever it applies.
    """
    formula = formula or doc.request.formula
    if formula not in FORMULAS:
        raise NoApplicableFormula(f"unknown formula {formula!r}")
    chosen = choose_formula(doc) if formula == "auto" else formula
    report = _run(doc, chosen)

    hyp = list(report.hypothesis_checks)
    counts = doc.transversality_counts()
    if chosen not in ("thm1", "cor26"):
        hyp.append(("transversality_codim_count", all(counts.values()), "checked"))
    if doc.hypotheses.transverse is not None:
        hyp.append(("transverse_declared", doc.hypotheses.transverse, "trusted"))
    if chosen != "thm2":
        hyp.append(("residual_after_blowup_declared", doc.hypotheses.residual_after_blowup, "trusted"))

    cross = []
    for other in _cross_candidates(doc, chosen):
        try:
            value = _run(doc, other).result
        except HypothesisError:
            continue
        cross.append((other, value == report.result))
    if all(c.dim == doc.ambient_dim - 1 for c in doc.components):
        total = sum((c.degree for c in doc.components), Fraction(0))
        cross.append(("hypersurface_union", segre_divisor(total, doc.ambient_dim) == report.result))
    if chosen == "thm2" and len(doc.components) == 2:
        x, y = doc.names
        cross.append(("thm2_per_dimension", blowup_per_dimension(pair_input(doc, x, y)) == report.result))
    return FormulaReport(report.formula_id, report.result, report.breakdown, hyp, cross)


def load_scene(path) -> SceneDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_scene(fh.read())
