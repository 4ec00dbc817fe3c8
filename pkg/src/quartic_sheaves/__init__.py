"""Exact toolkit for matrix presentations of 1-dimensional sheaves on
plane quartics: singularity tests via minors ideals, morphisms to curve /
Kronecker / flag data, and finite-field codimension experiments."""

__version__ = "0.1.0"

from .algebra import (  # noqa: F401
    FieldElem,
    FieldError,
    FieldSpec,
    HomogPoly,
    QuadricSplit,
    is_projectively_empty,
    quadric_split,
)
from .plane import (  # noqa: F401
    BudgetExceeded,
    ProjPoint,
    ProjTransform,
    collinear,
    enumerate_plane,
    standard_points,
    transform_to_standard,
)
from .presentations import (  # noqa: F401
    KroneckerModule,
    M0Presentation,
    M1Presentation,
    PresentationError,
    SingularityVerdict,
    boundary_fixture,
    determinant,
    find_witness,
    is_singular,
    is_stable,
    minors2x2,
    presentation_from_json,
    rank_at_point,
    sample_presentation,
)
from .flags import (  # noqa: F401
    CommonFactorError,
    Flag,
    SyzygyCertificate,
    SyzygyFailure,
    build_from_flag,
    common_linear_factor,
    fiber_twist,
    flag_of,
    h_points,
    kronecker_through_points,
    mu,
    nu,
    same_orbit_test,
    sample_rational_flag,
    sing_curve_meets_Z,
)
