"""Exact-arithmetic analysis of integral cubic forms, linear forms and their
unimodular symmetries on a rank-3 lattice."""

__version__ = "0.1.0"

from .core_arith import (
    CubicPolyZ,
    QuadSurd,
    solve_unit_quadratic,
    surd_compare,
    surd_normalize,
)
from .cubic_geometry import (
    QuadraticForm,
    QuadricLine,
    RelationReport,
    ThreeLines,
    UnipotentSplit,
    check_hyperbolic_relations,
    check_unipotent_relations,
    hyperbolic_factorization,
    quadric_signature,
    reconstruction_matches,
    singular_locus,
    tangent_plane,
    unipotent_factorization,
)
from .element_classify import (
    FiniteOrder,
    Hyperbolic,
    Identity,
    OutOfTheory,
    UnipotentDeficient,
    UnipotentFull,
    char_poly,
    classify,
    finite_eigenvalue_tag,
    finite_order,
    unipotent_frame,
)
from .group_structure import (
    CharacterWitness,
    GroupVerdict,
    RestrictedAction,
    TauWitness,
    UnipotentConstraintRecord,
    analyze_group,
    certify_discrete_cyclic,
    enumerate_symmetries,
    restrict_to_plane,
    scaling_character,
    tau,
    verify_unipotent_constraints,
)
from .lattice_forms import (
    LatticeMap,
    LinearForm,
    TrilinearForm,
    cubic_eval,
    preserves_pair,
    primitive_part,
    transform_cubic,
    trilinear_eval,
)

__all__ = [name for name in dir() if not name.startswith("_")]
