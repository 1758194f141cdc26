"""End invariants of SL(2,C) characters of the one-holed torus."""

from .bq import Exhausted, Satisfied, Violated, Witness, check_bq, check_bq_tail, explore
from .characters import (
    EPS,
    Character,
    ParseError,
    Tri,
    apply_word,
    classify_type,
    kappa,
    parse_complex,
    trace_word,
)
from .ends import (
    ArcCover,
    Budgets,
    CantorLike,
    Empty,
    FullPL,
    SingletonCurve,
    SingletonLamination,
    Undetermined,
    classify,
    compute_cover,
    hull_status,
    rational_end_test,
    reducible_classify,
)
from .farey import BASE_TRIPLE, Arc, ArcSet, DirectedFareyEdge, FareyPair, FareyTriple, Slope, farey_path
from .tau import ImaginaryForm, ellipse_walk, tau_of_edge, tau_reduce
from .trace_tree import descend_flow, flow_at, neighbors_of, trace_at, traces_at

__all__ = [
    "EPS", "Arc", "ArcCover", "ArcSet", "BASE_TRIPLE", "Budgets", "CantorLike", "Character",
    "DirectedFareyEdge", "Empty", "Exhausted", "FareyPair", "FareyTriple", "FullPL", "ImaginaryForm",
    "ParseError", "Satisfied", "SingletonCurve", "SingletonLamination", "Slope", "Tri", "Undetermined",
    "Violated", "Witness", "apply_word", "check_bq", "check_bq_tail", "classify", "classify_type",
    "compute_cover", "descend_flow", "ellipse_walk", "explore", "farey_path", "flow_at", "hull_status",
    "kappa", "neighbors_of", "parse_complex", "rational_end_test", "reducible_classify", "tau_of_edge",
    "tau_reduce", "trace_at", "trace_word", "traces_at",
]
