"""2-SAT through strongly connected components, and greedy lexicographic Max-2-SAT."""
from __future__ import annotations

from typing import Optional, Sequence

from .lexcnf import LexCnf

Bits = tuple[int, ...]


def _node(lit: int) -> int:
    v = abs(lit) - 1
    return 2 * v if lit > 0 else 2 * v + 1


def strongly_connected_components(adj: Sequence[Sequence[int]]) -> list[int]:
    """Component id per node, ids assigned in reverse topological order (Tarjan).

    Iterative, so deep implication chains do not hit the recursion limit.
    """
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    comps = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            node, i = work[-1]
            if i < len(adj[node]):
                work[-1] = (node, i + 1)
                nxt = adj[node][i]
                if index[nxt] == -1:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack[nxt] = True
                    work.append((nxt, 0))
                elif on_stack[nxt]:
                    low[node] = min(low[node], index[nxt])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = comps
                    if w == node:
                        break
                comps += 1
    return comp


def two_sat_satisfiable(clauses: Sequence[Sequence[int]], num_vars: int) -> Optional[Bits]:
    """A satisfying assignment of a width-<=2 CNF, or ``None``."""
    adj: list[list[int]] = [[] for _ in range(2 * num_vars)]
    for clause in clauses:
        if len(clause) == 0:
            return None
        if len(clause) > 2:
            raise ValueError(f"clause {tuple(clause)} is wider than 2")
        a = clause[0]
        b = clause[-1]
        adj[_node(-a)].append(_node(b))
        adj[_node(-b)].append(_node(a))
    comp = strongly_connected_components(adj)
    bits = []
    for v in range(num_vars):
        pos, neg = comp[2 * v], comp[2 * v + 1]
        if pos == neg:
            return None
        # Tarjan numbers sinks first; a literal is true when its component
        # comes later in topological order than its negation's.
        bits.append(1 if pos < neg else 0)
    return tuple(bits)


def greedy_lex_max_2sat(cnf: LexCnf) -> tuple[Bits, Bits]:
    """Keep each clause, in priority order, if it stays jointly satisfiable.

    Returns a model of the kept clauses and the kept-clause indicator, which
    is the lexicographically largest satisfied vector any assignment reaches.
    """
    if cnf.k != 2:
        raise ValueError(f"greedy Max-2-SAT needs k=2, got k={cnf.k}")
    kept: list[tuple[int, ...]] = []
    chosen = []
    for clause in cnf.clauses:
        if two_sat_satisfiable(kept + [clause], cnf.num_vars) is not None:
            kept.append(clause)
            chosen.append(1)
        else:
            chosen.append(0)
    model = two_sat_satisfiable(kept, cnf.num_vars)
    assert model is not None
    return model, tuple(chosen)
