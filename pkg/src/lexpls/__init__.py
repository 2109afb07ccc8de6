"""Lexicographic local search: FLIP, k-SAT/d-FLIP, orbit minimization, congestion games, and reductions."""

from .circuit import (
    AugmentedCircuit,
    Circuit,
    FlipInstance,
    best_neighbor,
    build_augmented,
    evaluate,
    is_flip_local_opt,
    payoff,
)
from .congestion import CongestionGame, Exponential, Step, best_response_dynamics
from .lexcnf import LexCnf, improving_move, is_sat_local_opt, lex_compare, satisfied_vector
from .plom import OrbitState, Permutation, PlomInstance, apply, compose, is_plom_local_min
from .search import SearchTrace, run_standard
from .twosat import greedy_lex_max_2sat, two_sat_satisfiable

__version__ = "0.1.0"

__all__ = [
    "AugmentedCircuit",
    "Circuit",
    "CongestionGame",
    "Exponential",
    "FlipInstance",
    "LexCnf",
    "OrbitState",
    "Permutation",
    "PlomInstance",
    "SearchTrace",
    "Step",
    "apply",
    "best_neighbor",
    "best_response_dynamics",
    "build_augmented",
    "compose",
    "evaluate",
    "greedy_lex_max_2sat",
    "improving_move",
    "is_flip_local_opt",
    "is_plom_local_min",
    "is_sat_local_opt",
    "lex_compare",
    "payoff",
    "run_standard",
    "satisfied_vector",
    "two_sat_satisfiable",
]
