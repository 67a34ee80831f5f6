import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segrecalc.errors import NoApplicableFormula, SchemaError, SemanticError, TransversalityViolated
from segrecalc.formulas import FormulaReport
from segrecalc.graded import DimClass
from segrecalc.report import (
    format_rational,
    report_from_json,
    report_to_dict,
    report_to_json,
    report_to_table,
)
from segrecalc.scenes import choose_formula, dispatch_compute, load_scene, parse_scene

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = sorted((ROOT / "tests" / "golden").glob("*.json"))


def scene(**overrides):
    base = {
        "schema_version": "1",
        "ambient": {"kind": "projective_space", "dim": 2},
        "components": [{"name": "A", "kind": "linear", "dim": 1}, {"name": "B", "kind": "linear", "dim": 1}],
    }
    base.update(overrides)
    return base


def parse(doc):
    return parse_scene(json.dumps(doc))


def values(report):
    return [c["value"] for c in report_to_dict(report)["coefficients"]]


# parsing


def test_minimal_scene_infers_transversality():
    doc = parse(scene())
    assert doc.hypotheses.transverse is None
    assert doc.intersections[("A", "B")].dim == 0
    assert all(doc.transversality_counts().values())
    assert choose_formula(doc) == "thm1"


def test_undeclared_component_is_named():
    with pytest.raises(SemanticError, match="'C'"):
        parse(scene(intersections={"A,C": 0}))


@pytest.mark.parametrize("key", ["B,A", "A,A", "A"])
def test_intersection_keys_sorted_and_distinct(key):
    with pytest.raises(SemanticError):
        parse(scene(intersections={key: 0}))


def test_unknown_field_reports_path():
    doc = scene()
    doc["components"][1]["colour"] = "red"
    with pytest.raises(SchemaError, match=r"\$\.components\[1\]") as exc:
        parse(doc)
    assert exc.value.path == "$.components[1]"


def test_bad_version():
    with pytest.raises(SchemaError, match="schema_version"):
        parse(scene(schema_version="2"))


def test_invalid_json_reports_line():
    with pytest.raises(SchemaError) as exc:
        parse_scene('{\n  "schema_version": "1",\n  oops\n}')
    assert exc.value.line == 3


@pytest.mark.parametrize(
    "overrides,error",
    [
        ({"ambient": {"kind": "grassmannian", "dim": 2}}, SchemaError),
        ({"ambient": {"kind": "projective_space", "dim": 0}}, SemanticError),
        ({"components": []}, SemanticError),
        ({"components": [{"name": "A", "kind": "linear", "dim": 2}]}, SemanticError),
        ({"components": [{"name": "A", "kind": "cone", "dim": 1}]}, SchemaError),
        ({"components": [{"name": "A", "kind": "linear", "dim": 1}, {"name": "A", "kind": "linear", "dim": 1}]}, SemanticError),
        ({"components": [{"name": "A", "kind": "bundle_input", "dim": 1}]}, SchemaError),
        ({"components": [{"name": "A", "kind": "bundle_input", "dim": 1, "normal_chern": [2, 1]}]}, SemanticError),
        ({"components": [{"name": "A", "kind": "bundle_input", "dim": 1, "normal_chern": [1, 0.5]}]}, SchemaError),
        ({"intersections": {"A,B": 2}}, SemanticError),
        ({"intersections": {"A,B": -1}}, SemanticError),
        ({"request": {"formula": "magic"}}, SchemaError),
        ({"request": {"format": "xml"}}, SchemaError),
        ({"request": {"max_codim": -1}}, SemanticError),
        ({"hypotheses": {"transverse": "yes"}}, SchemaError),
    ],
)
def test_rejections(overrides, error):
    with pytest.raises(error):
        parse(scene(**overrides))


def test_rational_strings_in_chern_data():
    doc = parse(scene(components=[
        {"name": "A", "kind": "bundle_input", "dim": 1, "normal_chern": [1, "3/2"]},
        {"name": "B", "kind": "linear", "dim": 1},
    ]))
    assert doc.component("A").normal_chern == (1, Fraction(3, 2))


# dispatch


def test_plane_and_line_selects_thm1_with_oracle():
    doc = parse(scene(
        ambient={"kind": "projective_space", "dim": 3},
        components=[{"name": "P", "kind": "linear", "dim": 2}, {"name": "L", "kind": "linear", "dim": 1}],
    ))
    report = dispatch_compute(doc)
    assert report.formula_id == "thm1"
    assert values(report) == ["0", "1", "0", "-4"]
    assert ("oracle", True) in report.cross_checks


def test_meeting_lines_select_blowup_formula():
    doc = parse(scene(
        ambient={"kind": "projective_space", "dim": 3},
        intersections={"A,B": 0},
        hypotheses={"residual_after_blowup": True},
    ))
    report = dispatch_compute(doc)
    assert report.formula_id == "thm2"
    assert values(report) == ["0", "0", "2", "-6"]
    assert ("residual_after_blowup", True, "trusted") in report.hypothesis_checks
    assert ("thm2_per_dimension", True) in report.cross_checks


def test_claimed_transversality_is_checked():
    doc = parse(scene(
        ambient={"kind": "projective_space", "dim": 3},
        intersections={"A,B": 0},
        hypotheses={"transverse": True},
    ))
    with pytest.raises(TransversalityViolated):
        dispatch_compute(doc)
    with pytest.raises(TransversalityViolated):
        dispatch_compute(doc, "thm1")


def test_no_applicable_formula():
    doc = parse(scene(ambient={"kind": "projective_space", "dim": 3}, intersections={"A,B": 0}))
    with pytest.raises(NoApplicableFormula):
        dispatch_compute(doc)


def test_declared_non_transverse_falls_back_to_divisor_formula():
    doc = parse(scene(hypotheses={"transverse": False}))
    report = dispatch_compute(doc)
    assert report.formula_id == "fulton"
    assert values(report) == ["0", "2", "-4"]


def test_explicit_formula_override():
    doc = parse(scene(
        ambient={"kind": "projective_space", "dim": 3},
        components=[{"name": "P", "kind": "linear", "dim": 2}, {"name": "L", "kind": "linear", "dim": 1}],
        hypotheses={"residual_after_blowup": True},
    ))
    for formula in ("thm1", "thm2", "cor26", "fulton", "oracle"):
        assert values(dispatch_compute(doc, formula)) == ["0", "1", "0", "-4"]


def test_oracle_inapplicable_to_meeting_lines():
    doc = parse(scene(ambient={"kind": "projective_space", "dim": 3}, intersections={"A,B": 0}))
    with pytest.raises(NoApplicableFormula):
        dispatch_compute(doc, "oracle")


def test_bundle_input_components():
    doc = parse(scene(
        ambient={"kind": "projective_space", "dim": 3},
        components=[
            {"name": "Q", "kind": "bundle_input", "dim": 2, "degree": 2, "normal_chern": [1, 2]},
            {"name": "S", "kind": "bundle_input", "dim": 2, "degree": 3, "normal_chern": [1, 3]},
        ],
    ))
    report = dispatch_compute(doc)
    assert values(report) == ["0", "5", "-25", "125"]
    assert all(ok for _, ok in report.cross_checks)
    assert {name for name, _ in report.cross_checks} >= {"fulton", "hypersurface_union"}


def test_non_transverse_bundle_meet_needs_degree():
    doc = parse(scene(
        ambient={"kind": "projective_space", "dim": 3},
        components=[
            {"name": "C", "kind": "bundle_input", "dim": 1, "degree": 2, "normal_chern": [1, 4]},
            {"name": "L", "kind": "linear", "dim": 1},
        ],
        intersections={"C,L": 0},
        hypotheses={"residual_after_blowup": True},
    ))
    with pytest.raises(SemanticError, match="degree"):
        dispatch_compute(doc)


def test_three_components():
    doc = parse(scene(
        ambient={"kind": "projective_space", "dim": 4},
        components=[
            {"name": "A", "kind": "linear", "dim": 3},
            {"name": "B", "kind": "linear", "dim": 3},
            {"name": "C", "kind": "linear", "dim": 2},
        ],
    ))
    report = dispatch_compute(doc)
    assert report.formula_id == "cor26"
    # two hyperplanes form a quadric divisor; the residual formula gives the same class
    assert values(report) == ["0", "2", "-3", "0", "27"]


def test_dispatch_is_deterministic():
    doc = load_scene(ROOT / "scenes" / "quadric_and_plane_p3.json")
    first = dispatch_compute(doc)
    for _ in range(3):
        again = dispatch_compute(doc)
        assert again.formula_id == first.formula_id and again.result == first.result


# report formatting


def test_rationals_serialize_as_strings():
    assert format_rational(Fraction(-3, 4)) == "-3/4"
    assert format_rational(Fraction(6, 3)) == "2"


def test_max_codim_filter():
    doc = load_scene(ROOT / "scenes" / "plane_line_p3.json")
    data = report_to_dict(dispatch_compute(doc), max_codim=1)
    assert [c["monomial"] for c in data["coefficients"]] == ["H^0", "H^1"]


def test_table_lists_dimensions_descending():
    doc = load_scene(ROOT / "scenes" / "plane_line_p3.json")
    table = report_to_table(dispatch_compute(doc))
    rows = [line.split() for line in table.splitlines() if line.strip()[:1].isdigit()]
    assert [r[0] for r in rows] == ["3", "2", "1", "0"]
    assert rows[-1][1:3] == ["H^3", "-4"]


fractions = st.builds(Fraction, st.integers(-10**12, 10**12), st.integers(1, 10**6))


@given(st.integers(0, 6).flatmap(lambda n: st.lists(fractions, min_size=n + 1, max_size=n + 1)))
@settings(max_examples=100, deadline=None)
def test_json_roundtrip_is_exact(coeffs):
    n = len(coeffs) - 1
    result = DimClass(n, tuple(coeffs))
    half = DimClass(n, tuple(c / 2 for c in coeffs))
    report = FormulaReport("thm1", result, {"a": half, "b": result - half}, [("x", True, "checked")], [("y", False)])
    back = report_from_json(report_to_json(report))
    assert back == report


# golden corpus


@pytest.mark.parametrize("path", [p for p in GOLDEN if "scene" in json.loads(p.read_text())], ids=lambda p: p.stem)
def test_golden_scenes(path):
    golden = json.loads(path.read_text())
    report = dispatch_compute(load_scene(ROOT / golden["scene"]))
    data = report_to_dict(report)
    assert data["formula"] == golden["formula"]
    assert data["coefficients"] == golden["coefficients"]
    assert [c["name"] for c in data["checks"]["cross_checks"]] == golden["cross_checks"]
    assert all(c["agrees"] for c in data["checks"]["cross_checks"])


@pytest.mark.parametrize("path", sorted((ROOT / "scenes").glob("*.json")), ids=lambda p: p.stem)
def test_example_scenes_parse(path):
    load_scene(path)
