"""Census of closed 3-manifolds obtained by gluing the faces of one cube."""

from .algebra import (
    AbelianInvariants,
    IntegerMatrix,
    h1_of_chain_complex,
    h1_with_coefficients,
    smith_normal_form,
)
from .blocks import (
    BlockKind,
    DiagonalPattern,
    MismatchReport,
    assemble_triangulation,
    mismatch_report,
    reference_pattern,
    select_block,
)
from .census import (
    CensusReport,
    ClassReport,
    Fingerprint,
    ReferenceEntry,
    classify,
    compute_fingerprint,
    reference_table,
    run_census,
    verify_theorem,
)
from .cube_complex import (
    ALREADY_ORIENTABLE,
    CubeGluing,
    CubulationSpec,
    Face,
    GluingPair,
    GluingSpecError,
    QuotientComplex,
    SquareSymmetry,
    build_quotient,
    cone_subdivide,
    euler_characteristic,
    is_closed_manifold,
    orientation_double_cover,
    parse_gluing_text,
    quotient_is_orientable,
)
from .enumeration import (
    CanonicalGluing,
    CubeSymmetry,
    canonical_form,
    enumerate_canonical,
    enumerate_raw,
)
from .triangulation import EdgeValenceProfile, LinkSummary, Triangulation

__all__ = [name for name in dir() if not name.startswith("_")]
