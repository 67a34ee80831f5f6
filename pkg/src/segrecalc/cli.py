"""Command-line interface.

Exit codes: 0 success, 1 hypothesis rejection, 2 scene schema or semantic
error, 3 identity-suite counterexample.
"""

from __future__ import annotations

import argparse
import sys

from .errors import HypothesisError, SceneError, SegreError
from .report import report_to_json, report_to_table
from .residual import q_polynomial
from .scenes import FORMATS, FORMULAS, dispatch_compute, load_scene
from .suite import run_identity_suite

EXIT_OK, EXIT_HYPOTHESIS, EXIT_SCENE, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3


def _compute(args) -> int:
    try:
        doc = load_scene(args.scene)
    except OSError as exc:
        print(f"error: cannot read scene: {exc}", file=sys.stderr)
        return EXIT_SCENE
    report = dispatch_compute(doc, args.formula)
    max_codim = args.max_codim if args.max_codim is not None else doc.request.max_codim
    fmt = args.format or doc.request.format
    out = report_to_json(report, max_codim) if fmt == "json" else report_to_table(report, max_codim)
    print(out)
    return EXIT_OK


def _verify(args) -> int:
    report = run_identity_suite(args.trunc, args.seed, args.cases)
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_COUNTEREXAMPLE


def _qpoly(args) -> int:
    if args.roots < 1 or args.trunc < 1:
        print("error: --roots and --trunc must be at least 1", file=sys.stderr)
        return EXIT_SCENE
    q = q_polynomial(args.roots, args.trunc)
    print(f"Q = {q.value}")
    print(f"reconstruction: {'holds' if q.reconstruction_holds() else 'FAILS'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="segrecalc", description="Exact Segre classes of unions in projective space.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate a scene file")
    p.add_argument("--scene", required=True, help="path to a JSON scene document")
    p.add_argument("--formula", choices=FORMULAS, default=None, help="override the scene's requested formula")
    p.add_argument("--max-codim", type=int, default=None, help="only print codimensions up to K")
    p.add_argument("--format", choices=FORMATS, default=None)
    p.set_defaults(func=_compute)

    p = sub.add_parser("verify", help="run the randomized identity suite")
    p.add_argument("--trunc", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=200)
    p.set_defaults(func=_verify)

    p = sub.add_parser("qpoly", help="print the Q-polynomial in Chern variables")
    p.add_argument("--roots", type=int, required=True)
    p.add_argument("--trunc", type=int, required=True)
    p.set_defaults(func=_qpoly)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HypothesisError as exc:
        print(f"hypothesis rejected: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except SceneError as exc:
        print(f"scene error: {exc}", file=sys.stderr)
        return EXIT_SCENE
    except SegreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCENE


if __name__ == "__main__":
    sys.exit(main())
