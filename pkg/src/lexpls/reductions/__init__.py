"""Reduction compilers and the extraction of source solutions from target solutions."""
from __future__ import annotations

from .circuit_eval import extract_circuit_output, extract_gate_values, reduce_circuit_eval_to_2sat
from .flip_to_sat import (
    FLIP_KINDS,
    audit_flip_reduction,
    extract_flip,
    reduce_flip_to_3sat2flip,
    reduce_flip_to_4sat1flip,
    reduce_flip_to_4sat2flip,
)
from .mapping import AuditError, ExtractionError, SolutionMapping, format_mapping, parse_mapping
from .to_congestion import assignment_to_profile, extract_congestion, reduce_sat_to_congestion
from .to_plom import (
    extract_abelian,
    extract_cyclic,
    reduce_sat_to_abelian_plom,
    reduce_sat_to_abelian_plom_2flip,
    reduce_sat_to_cyclic_plom,
)

_EXTRACTORS = {
    "flip-4sat2flip": extract_flip,
    "flip-3sat2flip": extract_flip,
    "flip-4sat1flip": extract_flip,
    "sat-abelian-plom": extract_abelian,
    "sat-abelian-plom-2flip": extract_abelian,
    "sat-cyclic-plom": extract_cyclic,
    "sat-congestion-step": extract_congestion,
    "sat-congestion-exponential": extract_congestion,
    "circuit-2sat": extract_circuit_output,
}


def extract_solution(mapping: SolutionMapping, target_solution):
    """Pull a target solution back to the source problem, per the mapping's kind."""
    try:
        fn = _EXTRACTORS[mapping.kind]
    except KeyError:
        raise ExtractionError(f"no extractor for mapping kind {mapping.kind!r}") from None
    return fn(mapping, target_solution)


__all__ = [
    "AuditError",
    "ExtractionError",
    "FLIP_KINDS",
    "SolutionMapping",
    "assignment_to_profile",
    "audit_flip_reduction",
    "extract_abelian",
    "extract_circuit_output",
    "extract_congestion",
    "extract_cyclic",
    "extract_flip",
    "extract_gate_values",
    "extract_solution",
    "format_mapping",
    "parse_mapping",
    "reduce_circuit_eval_to_2sat",
    "reduce_flip_to_3sat2flip",
    "reduce_flip_to_4sat1flip",
    "reduce_flip_to_4sat2flip",
    "reduce_sat_to_abelian_plom",
    "reduce_sat_to_abelian_plom_2flip",
    "reduce_sat_to_congestion",
    "reduce_sat_to_cyclic_plom",
]
