"""Exact computations for affine crystallographic actions of nilpotent and polycyclic groups."""

from __future__ import annotations

from .affine import (
    AffineLieElement,
    AffineMap,
    classify,
    engel_flag,
    exp_nilpotent,
    jordan_decompose,
    log_unipotent,
)
from .cryst import (
    AffineRep,
    conjugate,
    delta,
    find_conjugator,
    is_crystallographic,
    precompose,
    tau,
    validate_rep,
)
from .errors import (
    AffCrystError,
    DocumentError,
    InternalInvariantError,
    InvariantError,
    SearchExhaustedError,
)
from .linalg import Matrix, Polynomial, char_poly, det, nullspace, squarefree_part
from .nillie import Grading, LieAlgebra, LinearRep, derivation_space, lie_closure, nonsingular_element, validate
from .realization import ExtensionSpec, build_split_extension, cyclic_splitting, fixed_point_check, realize
from .scalar import QuadNumber
from .scheuneman import derivation_rep, graded_rep, three_step_rep, two_step_rep
from .shadow import (
    PolycyclicRep,
    char_restriction_check,
    hull_action_from_reference,
    is_crystallographic_poly,
    shadow_generators,
)
from .torus import CAProduct, apply_linear, are_conjugate, ca_to_rep, normalize_id, rep_to_ca, tbar

__version__ = "0.1.0"
