"""Serialization of formula reports as JSON documents and aligned tables."""

from __future__ import annotations

import json
from fractions import Fraction

from .formulas import FormulaReport
from .graded import DimClass


def format_rational(value) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _coefficients(c: DimClass, max_codim: int | None) -> list[dict]:
    n = c.ambient_dim
    out = []
    for dim in range(n, -1, -1):
        codim = n - dim
        if max_codim is not None and codim > max_codim:
            break
        out.append({"dim": dim, "monomial": f"H^{codim}", "value": format_rational(c[dim])})
    return out


def report_to_dict(report: FormulaReport, max_codim: int | None = None) -> dict:
    """Coefficients are listed by dimension, highest first, optionally cut at ``max_codim``."""
    return {
        "formula": report.formula_id,
        "ambient_dim": report.result.ambient_dim,
        "coefficients": _coefficients(report.result, max_codim),
        "breakdown": {
            name: _coefficients(term, max_codim) for name, term in report.breakdown.items()
        },
        "checks": {
            "hypotheses": [
                {"name": name, "passed": bool(ok), "status": status}
                for name, ok, status in report.hypothesis_checks
            ],
            "cross_checks": [{"name": name, "agrees": bool(ok)} for name, ok in report.cross_checks],
        },
    }


def report_to_json(report: FormulaReport, max_codim: int | None = None) -> str:
    return json.dumps(report_to_dict(report, max_codim), indent=2)


def _class_from(entries: list[dict], n: int) -> DimClass:
    coeffs = [Fraction(0)] * (n + 1)
    for entry in entries:
        coeffs[entry["dim"]] = Fraction(entry["value"])
    return DimClass(n, tuple(coeffs))


def report_from_dict(data: dict) -> FormulaReport:
    """Inverse of :func:`report_to_dict` for reports written without ``max_codim``."""
    n = data["ambient_dim"]
    checks = data.get("checks", {})
    return FormulaReport(
        data["formula"],
        _class_from(data["coefficients"], n),
        {name: _class_from(entries, n) for name, entries in data.get("breakdown", {}).items()},
        [(c["name"], c["passed"], c["status"]) for c in checks.get("hypotheses", [])],
        [(c["name"], c["agrees"]) for c in checks.get("cross_checks", [])],
    )


def report_from_json(text: str) -> FormulaReport:
    return report_from_dict(json.loads(text))


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    fmt = lambda r: "  ".join(cell.rjust(w) for cell, w in zip(r, widths)).rstrip()
    return [fmt(header), fmt(["-" * w for w in widths])] + [fmt(r) for r in rows]


def report_to_table(report: FormulaReport, max_codim: int | None = None) -> str:
    n = report.result.ambient_dim
    names = list(report.breakdown)
    header = ["dim", "monomial", "value"] + names
    rows = []
    for entry in _coefficients(report.result, max_codim):
        d = entry["dim"]
        rows.append([str(d), entry["monomial"], entry["value"]]
                    + [format_rational(report.breakdown[nm][d]) for nm in names])
    lines = [f"formula: {report.formula_id}    ambient: P^{n}", ""]
    lines += _table(header, rows)
    if report.hypothesis_checks:
        lines.append("")
        lines.append("hypotheses:")
        for name, ok, status in report.hypothesis_checks:
            lines.append(f"  {name}: {'yes' if ok else 'no'} ({status})")
    if report.cross_checks:
        lines.append("")
        lines.append("cross-checks:")
        for name, ok in report.cross_checks:
            lines.append(f"  {name}: {'agrees' if ok else 'DISAGREES'}")
    return "\n".join(lines)
