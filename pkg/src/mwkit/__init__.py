"""Merge sequences, exact merge-width at desk scale, and certificate extractors."""

from mwkit.errors import InvariantViolation, MwkitError, ParseError, PreconditionError
from mwkit.graph import (
    GF2Matrix,
    Graph,
    ball,
    clique_number,
    generate,
    gf2_rank,
    min_symmetric_difference,
    neighbourhood_delta,
    parse_graph,
    serialize_graph,
)
from mwkit.mergeseq import (
    MergeSequence,
    Violation,
    check_sync,
    is_structurally_bounded,
    minimize,
    parse_mseq,
    restrict,
    serialize_mseq,
    trivial_sequence,
    validate,
    width,
)
from mwkit.solver import SolveResult, exact_merge_width, normalize_binary

__version__ = "0.1.0"

__all__ = [
    "GF2Matrix",
    "Graph",
    "InvariantViolation",
    "MergeSequence",
    "MwkitError",
    "ParseError",
    "PreconditionError",
    "SolveResult",
    "Violation",
    "ball",
    "check_sync",
    "clique_number",
    "exact_merge_width",
    "generate",
    "gf2_rank",
    "is_structurally_bounded",
    "min_symmetric_difference",
    "minimize",
    "neighbourhood_delta",
    "normalize_binary",
    "parse_graph",
    "parse_mseq",
    "restrict",
    "serialize_graph",
    "serialize_mseq",
    "trivial_sequence",
    "validate",
    "width",
]
