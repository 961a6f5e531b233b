"""Euclidean distance degree of sparse polynomials, computed as the mixed volume
of the Newton polytopes of the Lagrange multiplier system, with exact
arithmetic throughout."""

from .edd import BoxSpec, EddReport, box_edd, box_projection_sum, edd_bound, elementary_symmetric, pyramid_mv
from .facial import (
    Case,
    EntryShape,
    FacialAuditReport,
    FacialClassification,
    PreconditionError,
    Shape,
    audit,
    classify_entry,
    classify_w,
    euler_witness,
)
from .lagrange import LagrangeSupports, LagrangeSystem, build_supports, build_system, random_general_u
from .lattice import (
    GeometryError,
    LatticePolytope,
    box,
    box_points,
    convex_hull,
    euclidean_volume,
    exposed_face,
    minkowski_sum,
    normal_representatives,
    project,
)
from .mixed_volume import (
    DegenerateLiftingError,
    EngineMismatchError,
    MixedCell,
    MixedVolumeResult,
    mixed_volume,
    mv_cells,
    mv_interval_split,
    mv_oracle,
)
from .poly import (
    SparsePolynomial,
    SupportSet,
    derivative,
    derivative_support,
    evaluate,
    random_general,
    restrict_to_face,
)

__version__ = "0.1.0"
