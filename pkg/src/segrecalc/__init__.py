"""Exact Segre class calculus for unions of subvarieties of projective space."""

from .bundles import BundleData, hyperplane_sum, quotient_chern, twist_chern, whitney_chern
from .errors import (
    HypothesisError,
    NoApplicableFormula,
    SceneError,
    SchemaError,
    SegreError,
    SemanticError,
    TransversalityViolated,
)
from .formulas import (
    FormulaReport,
    MultiInput,
    PairInput,
    aluffi_residual,
    blowup_per_dimension,
    fulton_residual,
    linear_closed_form,
    union_blowup_residual,
    union_fulton_pair,
    union_transverse_multi,
    union_transverse_pair,
)
from .graded import DimClass, GradedClass, regrade
from .linear import LinearScene, oracle_union_pair, segre_divisor, segre_linear
from .residual import gamma_correction, odot_multi, odot_pair, q_polynomial, q_pushforward_check
from .scenes import SceneDocument, dispatch_compute, parse_scene
from .suite import SuiteReport, run_identity_suite

__version__ = "0.1.0"

__all__ = [
    "BundleData",
    "hyperplane_sum",
    "quotient_chern",
    "twist_chern",
    "whitney_chern",
    "HypothesisError",
    "NoApplicableFormula",
    "SceneError",
    "SchemaError",
    "SegreError",
    "SemanticError",
    "TransversalityViolated",
    "FormulaReport",
    "MultiInput",
    "PairInput",
    "aluffi_residual",
    "blowup_per_dimension",
    "fulton_residual",
    "linear_closed_form",
    "union_blowup_residual",
    "union_fulton_pair",
    "union_transverse_multi",
    "union_transverse_pair",
    "DimClass",
    "GradedClass",
    "regrade",
    "LinearScene",
    "oracle_union_pair",
    "segre_divisor",
    "segre_linear",
    "gamma_correction",
    "odot_multi",
    "odot_pair",
    "q_polynomial",
    "q_pushforward_check",
    "SceneDocument",
    "dispatch_compute",
    "parse_scene",
    "SuiteReport",
    "run_identity_suite",
]
