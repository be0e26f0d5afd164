"""Integer homology of simplicial pairs, with the cycle <-> glued-pseudomanifold
correspondence and its verification harnesses (duality, exactness, bordism)."""

from .intlinalg import (
    AbelianGroup,
    CompositionNonzero,
    HomologyData,
    IntMatrix,
    NotChainMap,
    Presented,
    SmithForm,
    group_iso_check,
    homology_group,
    induced_map,
    invert_unimodular,
    smith_normal_form,
    solve_integer,
    subgroup_contains,
)
from .simplicial import (
    Chain,
    Cochain,
    Complex,
    NotFull,
    Simplex,
    SimplexNotInComplex,
    SimplicialPair,
    barycentric_subdivision,
    boundary,
    boundary_matrix,
    canonicalize,
    chain_from_json,
    chain_to_json,
    closed_star,
    coboundary,
    complement_complex,
    complex_from_json,
    complex_to_json,
    cone,
    cylinder_pair,
    disjoint_union,
    is_full,
    mobius_pair,
    open_star,
    pair_from_json,
    pair_to_json,
    relative_reduce,
    sd_chain,
    simplex,
    simplex_pair,
    skeleton,
    sphere,
    subdivide_pair,
    subdivision_homotopy,
    torus,
    unit_chain,
)
from .bmhomology import (
    FundamentalClassResult,
    HomologyResult,
    MVReport,
    NonOrientable,
    NotCover,
    NotPseudoManifold,
    PDReport,
    SimplexAtInfinity,
    StarVanishingReport,
    absolute_homology,
    bm_homology,
    cap_product,
    fundamental_cycle,
    local_restriction,
    mv_check,
    pd_check,
    star_neighborhood_vanishing,
)
from .pseudocycle import (
    Bordism,
    BordismReport,
    BoundaryMismatch,
    CombPseudocycle,
    DegenerateSimplex,
    FacePairing,
    InconsistentPairing,
    NotACycle,
    NotClosedRelL,
    PseudoManifold,
    PseudoManifoldReport,
    SimplexInstance,
    bordism_to_json,
    check_bordism,
    check_pseudomanifold,
    expand_to_unit,
    glue,
    glue_equivalence,
    nullbordism,
    pair_faces,
    phi,
    pm_to_json,
    psi,
    roundtrip_check,
)

__version__ = "0.1.0"
