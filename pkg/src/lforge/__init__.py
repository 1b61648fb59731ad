"""Exact computations with Laplacian polynomial algebras.

Higher products and the apolar inner product, degree-wise Reynolds
projection onto finitely generated graded subalgebras, Laplacian-closure
certification, finite-group invariant rings, Cartan–Münzner and Jordan
certifiers, and a numerical laboratory for level sets on the unit sphere.
"""

__version__ = "0.1.0"

from .algebra import GradedSubalgebra, ProjectionResult
from .apolar import bullet, bullet_inductive, dual_apply, gradient_pairing, inner_product
from .classifiers import jordan_closure_check, munzner_check, munzner_normalize
from .errors import (
    CapExceeded,
    DegreeCapError,
    DimensionError,
    EmptyFiber,
    FloatModeError,
    GradingError,
    GroupError,
    PolySyntaxError,
)
from .invariants import (
    FiniteOrthogonalGroup,
    act,
    dihedral_invariants,
    group_average,
    invariant_ring,
    verify_reynolds_equals_average,
)
from .laplacian import LaplacianReport, is_laplacian, laplacian_closure
from .poly import (
    Polynomial,
    evaluate,
    format_poly,
    homogeneous_components,
    laplacian,
    parse,
    partial,
    r_squared,
)

__all__ = [
    "CapExceeded",
    "DegreeCapError",
    "DimensionError",
    "EmptyFiber",
    "FiniteOrthogonalGroup",
    "FloatModeError",
    "GradedSubalgebra",
    "GradingError",
    "GroupError",
    "LaplacianReport",
    "PolySyntaxError",
    "Polynomial",
    "ProjectionResult",
    "act",
    "bullet",
    "bullet_inductive",
    "dihedral_invariants",
    "dual_apply",
    "evaluate",
    "format_poly",
    "gradient_pairing",
    "group_average",
    "homogeneous_components",
    "inner_product",
    "invariant_ring",
    "is_laplacian",
    "jordan_closure_check",
    "laplacian",
    "laplacian_closure",
    "munzner_check",
    "munzner_normalize",
    "parse",
    "partial",
    "r_squared",
    "verify_reynolds_equals_average",
]
