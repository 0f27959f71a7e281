"""Exact rational arithmetic for polyhedral Banach spaces.

Finite-dimensional spaces with rational polytope unit balls, nonexpansive
maps between them, amalgamation and norm-repair constructions, and
chain-built finite approximants of a universal nonexpansive operator,
all verified with zero-tolerance rational checks.
"""

from .amalgam import (
    CorrectionResult,
    PushoutResult,
    correction_norm_inf,
    correction_sum,
    mediating_map,
    pushout,
    pushout_mediating,
    square_sum,
)
from .banach import (
    EmbeddingClass,
    LinMap,
    Space,
    classify_embedding,
    dual_norm_eval,
    is_isometric,
    l1_space,
    l1_sum,
    line,
    linf_space,
    lower_isometry_bound,
    map_distance,
    norm_eval,
    operator_norm,
    pullback_space,
    quotient,
    space_from_hrep,
    space_from_vrep,
    zero_space,
)
from .errors import (
    CapExceeded,
    DimensionMismatch,
    NotANorm,
    ParseError,
    PolybanError,
    PreconditionError,
    VerificationError,
)
from .exactlin import QMat, QVec, rat, rat_str
from .fraisse import (
    BnfTranscript,
    Chain,
    ChainStage,
    EpsSchedule,
    LogEntry,
    OperatorSquare,
    Task,
    back_and_forth,
    build_chain,
    claim_step,
    embed_operator,
    ensure_dim,
    enumerate_tasks,
    g_witness,
    identity_square,
    kernel_witness,
    kernel_witness_extended,
    make_square,
    pad_map,
    space_witness,
    step_chain,
    surjectivity_witness,
    surjectivity_witness_extended,
)
from .polytope import Ball, complete_representations
from .rationalize import NormRepair, repair_norm, repair_operator

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BnfTranscript",
    "CapExceeded",
    "Chain",
    "ChainStage",
    "CorrectionResult",
    "DimensionMismatch",
    "EmbeddingClass",
    "EpsSchedule",
    "LinMap",
    "LogEntry",
    "NormRepair",
    "NotANorm",
    "OperatorSquare",
    "ParseError",
    "PolybanError",
    "PreconditionError",
    "PushoutResult",
    "QMat",
    "QVec",
    "Space",
    "Task",
    "VerificationError",
    "back_and_forth",
    "build_chain",
    "claim_step",
    "classify_embedding",
    "complete_representations",
    "correction_norm_inf",
    "correction_sum",
    "dual_norm_eval",
    "embed_operator",
    "ensure_dim",
    "enumerate_tasks",
    "g_witness",
    "identity_square",
    "is_isometric",
    "kernel_witness",
    "kernel_witness_extended",
    "l1_space",
    "l1_sum",
    "line",
    "linf_space",
    "lower_isometry_bound",
    "make_square",
    "map_distance",
    "mediating_map",
    "norm_eval",
    "operator_norm",
    "pad_map",
    "pullback_space",
    "pushout",
    "pushout_mediating",
    "quotient",
    "rat",
    "rat_str",
    "repair_norm",
    "repair_operator",
    "space_from_hrep",
    "space_from_vrep",
    "space_witness",
    "square_sum",
    "step_chain",
    "surjectivity_witness",
    "surjectivity_witness_extended",
    "zero_space",
]
