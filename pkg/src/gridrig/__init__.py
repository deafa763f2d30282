"""Rigidity of reflection-symmetric bar-joint frameworks in quadrilateral-ball norms."""

from .characterize import CharacterizationReport, characterize, crosscheck, crosscheck_batch
from .geometry import F1, F2, L1, LINF, Framework, IllPositioned, QuadNorm, SymmetricFramework, colour_edges, make_norm
from .moves import ANTI, SYM, ConstructionSequence, apply_move, extract_sequence, inverse_candidates, random_sequence, replay
from .quotient import GainEdge, SignedQuotientGraph, balance, build_covering, build_quotient, switch
from .realize import Realization, random_realize, realize
from .rigidity import (
    RigidityReport,
    decompose_flex,
    flex_bases,
    orbit_matrix_anti,
    orbit_matrix_sym,
    rigidity_matrix,
    rigidity_report,
)
from .sparsity import check_gain_sparse, oracle_gain_sparse_edge_subsets

__all__ = [
    "ANTI",
    "SYM",
    "F1",
    "F2",
    "L1",
    "LINF",
    "CharacterizationReport",
    "ConstructionSequence",
    "Framework",
    "GainEdge",
    "IllPositioned",
    "QuadNorm",
    "Realization",
    "RigidityReport",
    "SignedQuotientGraph",
    "SymmetricFramework",
    "apply_move",
    "balance",
    "build_covering",
    "build_quotient",
    "characterize",
    "check_gain_sparse",
    "colour_edges",
    "crosscheck",
    "crosscheck_batch",
    "decompose_flex",
    "extract_sequence",
    "flex_bases",
    "inverse_candidates",
    "make_norm",
    "oracle_gain_sparse_edge_subsets",
    "orbit_matrix_anti",
    "orbit_matrix_sym",
    "random_realize",
    "random_sequence",
    "realize",
    "replay",
    "rigidity_matrix",
    "rigidity_report",
    "switch",
]
