"""Minimal discrete exponential families, their G_n-equivalence, and canonical affine subspaces."""

from .equivalence import (
    WitnessReport,
    are_equivalent,
    psi_residual,
    recover_witness,
    transfer_theta,
)
from .errors import ConditioningError, DegeneracyError, InputError
from .expfam import Representation, density, log_partition, membership
from .function_space import (
    Frame,
    FuncVec,
    MinimalFrame,
    QuotientVec,
    SampleSpace,
    difference_matrix,
    is_minimal_frame,
    quotient_project,
    rank_with_tolerance,
    select_pivot_indices,
)
from .grassmann import (
    AffineSubspace,
    graff_dimension,
    graff_from_rep,
    pi_projection,
    stabilizer_is_trivial,
    subspaces_equal,
)
from .group import AffDagElement, GroupElement, act, compose, embed_matrix, inverse

__all__ = [
    "AffDagElement", "AffineSubspace", "ConditioningError", "DegeneracyError", "Frame", "FuncVec",
    "GroupElement", "InputError", "MinimalFrame", "QuotientVec", "Representation", "SampleSpace",
    "WitnessReport", "act", "are_equivalent", "compose", "density", "difference_matrix",
    "embed_matrix", "graff_dimension", "graff_from_rep", "inverse", "is_minimal_frame",
    "log_partition", "membership", "pi_projection", "psi_residual", "quotient_project",
    "rank_with_tolerance", "recover_witness", "select_pivot_indices", "stabilizer_is_trivial",
    "subspaces_equal", "transfer_theta",
]

__version__ = "0.1.0"
