"""Circuit evaluation as lexicographic 2-SAT/1-FLIP.

Unit clauses pin the inputs at the top; each gate then contributes
``(y1 ∨ g)``, ``(y2 ∨ g)`` and ``(¬g)`` in topological order.  The lower
weight of ``(¬g)`` makes ``g`` false only when both operands are true.
"""
from __future__ import annotations

from typing import Sequence

from ..circuit import Circuit, ShapeError
from ..lexcnf import LexCnf
from .mapping import AuditError, ExtractionError, SolutionMapping


def reduce_circuit_eval_to_2sat(circuit: Circuit, inputs: Sequence[int]) -> tuple[LexCnf, SolutionMapping]:
    n = circuit.num_inputs
    if len(inputs) != n:
        raise ShapeError(f"expected {n} input bits, got {len(inputs)}")
    clauses = [((i + 1) if b else -(i + 1),) for i, b in enumerate(inputs)]
    for j, (a, b) in enumerate(circuit.gates):
        g = n + j + 1
        clauses.append((a + 1, g))
        clauses.append((b + 1, g) if b != a else (a + 1, g))
        clauses.append((-g,))
    cnf = LexCnf(n + circuit.num_gates, tuple(clauses), 2, 1)
    mapping = SolutionMapping("circuit-2sat")
    mapping.meta.update(n=str(n), gates=str(circuit.num_gates), input="".join(map(str, inputs)))
    for i in range(n):
        mapping.add(f"x{i + 1}", f"v{i + 1}")
    for j in range(circuit.num_gates):
        mapping.add(f"g{j + 1}", f"v{n + j + 1}")
    for k, o in enumerate(circuit.outputs):
        mapping.add(f"out{k + 1}", f"v{n + o + 1}")
    if len(cnf.clauses) != n + 3 * circuit.num_gates:
        raise AuditError("clause count differs from n + 3G")
    return cnf, mapping


def extract_gate_values(mapping: SolutionMapping, bits: Sequence[int]) -> tuple[int, ...]:
    G = int(mapping.meta["gates"])
    return tuple(_read(mapping, bits, f"g{j + 1}") for j in range(G))


def extract_circuit_output(mapping: SolutionMapping, bits: Sequence[int]) -> tuple[int, ...]:
    outs = sorted((int(k[3:]), k) for k in mapping.entries if k.startswith("out"))
    return tuple(_read(mapping, bits, k) for _, k in outs)


def _read(mapping: SolutionMapping, bits: Sequence[int], name: str) -> int:
    v = mapping.var(name)
    if v >= len(bits):
        raise ExtractionError(f"assignment too short for {name}")
    return bits[v]
