"""Brute-force ground truth on desk-scale instances.

The problem adapters here recompute everything from scratch (no incremental
evaluators, no pruning), so they serve as an independent check on the
library's own local-optimality predicates.
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Optional, Sequence

from .circuit import FlipInstance, evaluate
from .congestion import CongestionGame, GameSearch, format_profile
from .lexcnf import LexCnf
from .plom import OrbitState, PlomInstance, PlomSearch, apply, format_state, rotate_cycles, state_from_certificate
from .search import CnfSearch, FlipSearch, bitstring, run_standard

DEFAULT_SIZE_LIMIT = 2**20


class SpaceTooLarge(ValueError):
    def __init__(self, size: int, limit: int):
        super().__init__(f"solution space has {size} elements, limit is {limit}")
        self.size = size
        self.limit = limit


def _check(size: int, limit: int) -> None:
    if size > limit:
        raise SpaceTooLarge(size, limit)


def _bits_space(n: int) -> Iterator[tuple[int, ...]]:
    return itertools.product((0, 1), repeat=n)


# ---------------------------------------------------------------------------
# problem adapters

class Problem:
    """``neighbors`` lists every neighbor; ``improves(a, b)`` is strict improvement."""

    descriptor = "problem"

    def size(self) -> int:
        raise NotImplementedError

    def solutions(self, limit: int) -> Iterator[Any]:
        raise NotImplementedError

    def neighbors(self, sol) -> list:
        raise NotImplementedError

    def improves(self, new, old) -> bool:
        raise NotImplementedError

    def score(self, sol):
        """Larger is better."""
        raise NotImplementedError

    def key(self, sol):
        return sol

    def format(self, sol) -> str:
        return "assign " + bitstring(sol) + "\n"

    def is_local_opt(self, sol) -> bool:
        return not any(self.improves(nb, sol) for nb in self.neighbors(sol))

    def random_solution(self, rng: random.Random):
        raise NotImplementedError

    def search(self, start, pivot: str = "first"):
        raise NotImplementedError


class FlipProblem(Problem):
    descriptor = "flip"

    def __init__(self, flip: FlipInstance):
        self.flip = flip
        self._val: dict = {}

    def value(self, x) -> int:
        x = tuple(x)
        if x not in self._val:
            out = 0
            for b in evaluate(self.flip.circuit, x):
                out = 2 * out + b
            self._val[x] = out
        return self._val[x]

    def size(self):
        return 2**self.flip.n

    def solutions(self, limit):
        _check(self.size(), limit)
        return _bits_space(self.flip.n)

    def neighbors(self, x):
        return [x[:i] + (1 - x[i],) + x[i + 1:] for i in range(len(x))]

    def improves(self, new, old):
        return self.value(new) > self.value(old)

    def score(self, x):
        return self.value(x)

    def random_solution(self, rng):
        return tuple(rng.getrandbits(1) for _ in range(self.flip.n))

    def search(self, start, pivot="first"):
        return FlipSearch(self.flip, start, pivot)


class CnfProblem(Problem):
    descriptor = "lexcnf"

    def __init__(self, cnf: LexCnf):
        self.cnf = cnf
        n = cnf.num_vars
        moves = [(i,) for i in range(n)]
        if cnf.d >= 2:
            bad = {tuple(sorted((a - 1, b - 1))) for a, b in cnf.forbidden}
            moves += [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in bad]
        self.moves = moves

    def vector(self, bits) -> tuple[int, ...]:
        return tuple(int(any((bits[abs(l) - 1] == 1) == (l > 0) for l in c)) for c in self.cnf.clauses)

    def size(self):
        return 2**self.cnf.num_vars

    def solutions(self, limit):
        _check(self.size(), limit)
        return _bits_space(self.cnf.num_vars)

    def neighbors(self, bits):
        out = []
        for mv in self.moves:
            nb = list(bits)
            for i in mv:
                nb[i] ^= 1
            out.append(tuple(nb))
        return out

    def improves(self, new, old):
        return self.vector(new) > self.vector(old)

    def score(self, bits):
        return self.vector(bits)

    def random_solution(self, rng):
        return tuple(rng.getrandbits(1) for _ in range(self.cnf.num_vars))

    def search(self, start, pivot="first"):
        return CnfSearch(self.cnf, start, pivot)


class PlomProblem(Problem):
    """Solutions are orbit elements with certificates; smaller strings are better."""

    descriptor = "plom"

    def __init__(self, inst: PlomInstance):
        self.inst = inst

    def size(self):
        if self.inst.flavor == "cyclic":
            return self.inst.group_order
        if self.inst.flavor == "abelian-involution":
            return 2**self.inst.num_generators
        return -1

    def solutions(self, limit):
        inst = self.inst
        if inst.flavor == "cyclic":
            _check(inst.group_order, limit)
            return (state_from_certificate(inst, "exponent", e) for e in range(inst.group_order))
        return iter(self._bfs(limit))

    def _bfs(self, limit) -> list[OrbitState]:
        # certificates are parity vectors (abelian) or words (general); one per distinct string
        inst = self.inst
        kind = "parity" if inst.flavor == "abelian-involution" else "word"
        start = state_from_certificate(inst, kind, (0,) * inst.num_generators if kind == "parity" else ())
        seen = {start.current: start}
        frontier = [start]
        while frontier:
            nxt = []
            for st in frontier:
                for g in range(inst.num_generators):
                    v = apply(st.current, inst.gens[g])
                    if v in seen:
                        continue
                    if kind == "parity":
                        cert = list(st.certificate)
                        cert[g] ^= 1
                        new = OrbitState(v, kind, tuple(cert))
                    else:
                        new = OrbitState(v, kind, st.certificate + (g,))
                    seen[v] = new
                    if len(seen) > limit:
                        raise SpaceTooLarge(len(seen), limit)
                    nxt.append(new)
            frontier = nxt
        return sorted(seen.values(), key=lambda s: s.current)

    def neighbors(self, st):
        inst = self.inst
        out = []
        for g in range(inst.num_generators):
            if inst.flavor == "cyclic":
                v = rotate_cycles(st.current, inst.cycles, inst.exponents[g])
                out.append(OrbitState(v, "exponent", (st.certificate + inst.exponents[g]) % inst.group_order))
            else:
                v = apply(st.current, inst.gens[g])
                if st.kind == "parity":
                    cert = list(st.certificate)
                    cert[g] ^= 1
                    out.append(OrbitState(v, "parity", tuple(cert)))
                else:
                    out.append(OrbitState(v, "word", st.certificate + (g,)))
        return out

    def improves(self, new, old):
        return new.current < old.current

    def score(self, st):
        return tuple(1 - b for b in st.current)

    def key(self, st):
        return st.current

    def format(self, st):
        return format_state(st)

    def random_solution(self, rng):
        inst = self.inst
        if inst.flavor == "cyclic":
            return state_from_certificate(inst, "exponent", rng.randrange(inst.group_order))
        if inst.flavor == "abelian-involution":
            return state_from_certificate(inst, "parity", tuple(rng.getrandbits(1) for _ in range(inst.num_generators)))
        word = tuple(rng.randrange(inst.num_generators) for _ in range(4 * inst.num_generators))
        return state_from_certificate(inst, "word", word)

    def search(self, start, pivot="first"):
        return PlomSearch(self.inst, start, pivot)


class GameProblem(Problem):
    """Profiles; a neighbor is any unilateral switch, improving when alpha-improving."""

    descriptor = "cgame"

    def __init__(self, game: CongestionGame):
        self.game = game

    def size(self):
        out = 1
        for s in self.game.strategies:
            out *= len(s)
        return out

    def solutions(self, limit):
        _check(self.size(), limit)
        return itertools.product(*(range(len(s)) for s in self.game.strategies))

    def neighbors(self, prof):
        out = []
        for i, strats in enumerate(self.game.strategies):
            for c in range(len(strats)):
                if c != prof[i]:
                    out.append(prof[:i] + (c,) + prof[i + 1:])
        return out

    def improves(self, new, old):
        diff = [i for i in range(len(old)) if new[i] != old[i]]
        if len(diff) != 1:
            return False
        i = diff[0]
        return self.game.player_cost(old, i) > self.game.alpha * self.game.player_cost(new, i)

    def score(self, prof):
        return -self.game.potential(prof)

    def format(self, prof):
        return format_profile(prof)

    def random_solution(self, rng):
        return tuple(rng.randrange(len(s)) for s in self.game.strategies)

    def search(self, start, pivot="first"):
        return GameSearch(self.game, start)


# ---------------------------------------------------------------------------
# local optima

@dataclass
class LocalOptimaReport:
    descriptor: str
    all_solutions_scanned: int
    local_optima: list
    global_optimum: Any

    def format(self, fmt: Callable[[Any], str]) -> str:
        lines = [f"problem {self.descriptor}", f"scanned {self.all_solutions_scanned}",
                 f"local_optima {len(self.local_optima)}", "global " + fmt(self.global_optimum).strip()]
        lines += ["local " + fmt(s).strip() for s in self.local_optima]
        return "\n".join(lines) + "\n"


def enumerate_local_optima(problem: Problem, size_limit: int = DEFAULT_SIZE_LIMIT) -> LocalOptimaReport:
    scanned = 0
    optima = []
    best = None
    for sol in problem.solutions(size_limit):
        scanned += 1
        if best is None or problem.score(sol) > problem.score(best):
            best = sol
        if problem.is_local_opt(sol):
            optima.append(sol)
    return LocalOptimaReport(problem.descriptor, scanned, optima, best)


# ---------------------------------------------------------------------------
# transition graphs

@dataclass
class TransitionGraph:
    nodes: list
    edges: dict = field(default_factory=dict)  # key -> sorted list of keys

    @property
    def num_edges(self) -> int:
        return sum(len(v) for v in self.edges.values())

    def sinks(self) -> list:
        return [k for k in self.edges if not self.edges[k]]

    def is_acyclic(self) -> bool:
        color = dict.fromkeys(self.edges, 0)
        for root in self.edges:
            if color[root]:
                continue
            stack = [(root, iter(self.edges[root]))]
            color[root] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    color[node] = 2
                    stack.pop()
                elif color[nxt] == 1:
                    return False
                elif color[nxt] == 0:
                    color[nxt] = 1
                    stack.append((nxt, iter(self.edges[nxt])))
        return True

    def sink_reachable(self) -> bool:
        """Every node reaches a sink (walks backwards from the sinks)."""
        rev: dict = {k: [] for k in self.edges}
        for a, outs in self.edges.items():
            for b in outs:
                rev[b].append(a)
        seen = set(self.sinks())
        stack = list(seen)
        while stack:
            b = stack.pop()
            for a in rev[b]:
                if a not in seen:
                    seen.add(a)
                    stack.append(a)
        return len(seen) == len(self.edges)

    def relabel(self, fn: Callable) -> "TransitionGraph":
        edges = {fn(a): sorted(fn(b) for b in outs) for a, outs in self.edges.items()}
        return TransitionGraph(sorted(edges), edges)

    def same_as(self, other: "TransitionGraph") -> bool:
        return self.edges == other.edges


def transition_graph(problem: Problem, size_limit: int = DEFAULT_SIZE_LIMIT) -> TransitionGraph:
    sols = list(problem.solutions(size_limit))
    edges = {}
    for s in sols:
        edges[problem.key(s)] = sorted({problem.key(nb) for nb in problem.neighbors(s) if problem.improves(nb, s)})
    return TransitionGraph(sorted(edges), edges)


def neighbor_graph(problem: Problem, size_limit: int = DEFAULT_SIZE_LIMIT) -> TransitionGraph:
    """All neighbor edges, improving or not."""
    sols = list(problem.solutions(size_limit))
    edges = {problem.key(s): sorted({problem.key(nb) for nb in problem.neighbors(s)}) for s in sols}
    return TransitionGraph(sorted(edges), edges)


# ---------------------------------------------------------------------------
# reduction validation

def _endpoint(job):
    problem, start, pivot, max_steps = job
    tr = run_standard(problem.search(start, pivot), max_steps=max_steps, record_trace=False)
    return tr.terminated, tr.endpoint


def run_restarts(problem: Problem, starts: Sequence, pivot: str = "first", max_steps: int = 10**6,
                 workers: int = 1) -> list[tuple[bool, Any]]:
    """``(terminated, endpoint)`` per start, in start order whatever the worker count."""
    jobs = [(problem, s, pivot, max_steps) for s in starts]
    if workers <= 1 or len(jobs) < 2:
        return [_endpoint(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_endpoint, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


@dataclass
class ValidationReport:
    kind: str
    mode: str
    checked: int
    source_local_optima: int
    target_local_optima: int = 0
    extracted_distinct: int = 0
    counterexamples: list = field(default_factory=list)  # (serialized target solution, reason)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def format(self) -> str:
        lines = [
            f"kind {self.kind}",
            f"mode {self.mode}",
            f"checked {self.checked}",
            f"source_local_optima {self.source_local_optima}",
            f"target_local_optima {self.target_local_optima}",
            f"extracted_distinct {self.extracted_distinct}",
            f"counterexamples {len(self.counterexamples)}",
            f"result {'ok' if self.ok else 'FAIL'}",
        ]
        for sol, why in self.counterexamples:
            lines.append(f"counterexample {why}")
            lines.extend("  " + ln for ln in sol.strip().splitlines())
        return "\n".join(lines) + "\n"


def validate_reduction(
    source: Problem,
    target: Problem,
    mapping,
    mode: str = "exhaustive",
    restarts: int = 100,
    seed: int = 0,
    size_limit: int = DEFAULT_SIZE_LIMIT,
    max_steps: int = 10**6,
    pivot: str = "first",
    extract: Optional[Callable] = None,
    max_counterexamples: int = 10,
    workers: int = 1,
) -> ValidationReport:
    """Every (exhaustive) or every reached (sampled) target local optimum must pull back to a source local optimum."""
    if extract is None:
        from .reductions import extract_solution as extract
    src_opt = {source.key(s) for s in enumerate_local_optima(source, size_limit).local_optima}
    report = ValidationReport(mapping.kind, mode if mode == "exhaustive" else f"sampled {restarts}", 0, len(src_opt))
    if mode == "exhaustive":
        candidates = enumerate_local_optima(target, size_limit).local_optima
        report.target_local_optima = len(candidates)
    elif mode == "sampled":
        rng = random.Random(seed)
        starts = [target.random_solution(rng) for _ in range(restarts)]
        candidates = []
        for done, end in run_restarts(target, starts, pivot, max_steps, workers):
            if not done:
                report.counterexamples.append((target.format(end), "no-termination"))
                continue
            candidates.append(end)
        report.target_local_optima = len({target.key(c) for c in candidates})
    else:
        raise ValueError("mode must be 'exhaustive' or 'sampled'")
    extracted = set()
    for sol in candidates:
        report.checked += 1
        try:
            x = tuple(extract(mapping, sol))
        except Exception as exc:  # ExtractionError, or a mapping that points outside the target
            why = f"extraction-failed: {exc}"
        else:
            extracted.add(x)
            if source.key(x) in src_opt:
                continue
            why = f"not-a-source-local-optimum: {bitstring(x)}"
        if len(report.counterexamples) < max_counterexamples:
            report.counterexamples.append((target.format(sol), why))
    report.extracted_distinct = len(extracted)
    return report
