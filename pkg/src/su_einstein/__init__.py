"""Left-invariant Einstein metrics on SU(n).

Builds generator bases of su(n) adapted to two class-diagonal metric ansatz
families, computes curvature directly from structure constants, solves the
Einstein condition (closed forms and seeded multistart), and catalogs the
inequivalent solutions per n by the scale-free invariant |Riem|^2 / lambda^2.
"""

from .catalog import CatalogEntry, Case, case_classify, enumerate_metrics, paper_count
from .curvature import (
    CurvatureBundle,
    MetricSpec,
    class_ricci_eigenvalues,
    curvature_bundle,
    einstein_residual,
    frame_weights,
    invariant_I1,
    levi_civita,
    lower_riemann,
    ricci,
    riem_norm_sq,
    riemann,
    scalar_curvature,
)
from .liealg import (
    GeneratorBasis,
    StructureConstants,
    build_scheme1_basis,
    build_scheme2_basis,
    exact_validate,
    structure_constants,
    validate_basis,
)
from .solver import (
    EinsteinRecord,
    EinsteinSystem,
    closed_form_scheme1,
    closed_form_scheme2,
    einstein_system,
    multistart_search,
    newton_solve,
    scheme1_system,
    scheme2_system,
    solve_configuration,
)

__version__ = "0.1.0"

__all__ = [
    "CatalogEntry",
    "Case",
    "CurvatureBundle",
    "EinsteinRecord",
    "EinsteinSystem",
    "GeneratorBasis",
    "MetricSpec",
    "StructureConstants",
    "build_scheme1_basis",
    "build_scheme2_basis",
    "case_classify",
    "class_ricci_eigenvalues",
    "closed_form_scheme1",
    "closed_form_scheme2",
    "curvature_bundle",
    "einstein_residual",
    "einstein_system",
    "enumerate_metrics",
    "exact_validate",
    "frame_weights",
    "invariant_I1",
    "levi_civita",
    "lower_riemann",
    "multistart_search",
    "newton_solve",
    "paper_count",
    "ricci",
    "riem_norm_sq",
    "riemann",
    "scalar_curvature",
    "scheme1_system",
    "scheme2_system",
    "solve_configuration",
    "structure_constants",
    "validate_basis",
]
