"""CNF formulas whose clause weights are strictly lexicographic.

Clause 1 outweighs all later clauses combined, so comparing two assignments
only needs their satisfied-clause bit vectors compared lexicographically.
Weights are never materialized.

Literals are DIMACS integers (``3`` is x3, ``-3`` its negation); assignments
are 0/1 tuples indexed from 0, so variable ``v`` lives at ``bits[v - 1]``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

Bits = tuple[int, ...]
Move = tuple[int, ...]  # 0-based variable indices, ascending

PIVOTS = ("first", "best")


class CnfError(ValueError):
    pass


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def lex_compare(u: Sequence[int], v: Sequence[int]) -> Ordering:
    if len(u) != len(v):
        raise CnfError(f"length mismatch: {len(u)} vs {len(v)}")
    for a, b in zip(u, v):
        if a != b:
            return Ordering.GREATER if a > b else Ordering.LESS
    return Ordering.EQUAL


@dataclass(frozen=True)
class LexCnf:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    k: int
    d: int = 1
    forbidden: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.d not in (1, 2):
            raise CnfError(f"flip radius must be 1 or 2, got {self.d}")
        for idx, clause in enumerate(self.clauses):
            if len(clause) > self.k:
                raise CnfError(f"clause {idx + 1} has width {len(clause)} > k={self.k}")
            seen = set()
            for lit in clause:
                v = abs(lit)
                if lit == 0 or v > self.num_vars:
                    raise CnfError(f"clause {idx + 1}: literal {lit} out of range")
                if v in seen:
                    raise CnfError(f"clause {idx + 1}: variable {v} repeated")
                seen.add(v)
        pairs = set()
        for pair in self.forbidden:
            i, j = sorted(pair)
            if i == j or not (1 <= i and j <= self.num_vars):
                raise CnfError(f"bad forbidden pair {pair}")
            pairs.add((i, j))
        object.__setattr__(self, "forbidden", frozenset(pairs))

    @property
    def m(self) -> int:
        return len(self.clauses)

    @cached_property
    def occurrences(self) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
        """Per 0-based variable: (clause indices ascending, literal signs)."""
        occ: list[tuple[list[int], list[int]]] = [([], []) for _ in range(self.num_vars)]
        for c, clause in enumerate(self.clauses):
            for lit in clause:
                cs, ss = occ[abs(lit) - 1]
                cs.append(c)
                ss.append(1 if lit > 0 else 0)
        return tuple((tuple(cs), tuple(ss)) for cs, ss in occ)

    @cached_property
    def cooccurring(self) -> tuple[tuple[int, ...], ...]:
        nb: list[set[int]] = [set() for _ in range(self.num_vars)]
        for clause in self.clauses:
            vs = [abs(l) - 1 for l in clause]
            for a in vs:
                nb[a].update(vs)
        for v in range(self.num_vars):
            nb[v].discard(v)
        return tuple(tuple(sorted(s)) for s in nb)

    def is_forbidden(self, u: int, v: int) -> bool:
        """``u``, ``v`` are 0-based."""
        a, b = (u, v) if u < v else (v, u)
        return (a + 1, b + 1) in self.forbidden

    def allowed_moves(self) -> list[Move]:
        """Every flip set of size <= d in scan order."""
        moves: list[Move] = [(v,) for v in range(self.num_vars)]
        if self.d >= 2:
            moves += [p for p in combinations(range(self.num_vars), 2) if not self.is_forbidden(*p)]
        return moves


def _check_len(cnf: LexCnf, bits: Sequence[int]) -> None:
    if len(bits) != cnf.num_vars:
        raise ValueError(f"assignment has {len(bits)} bits, formula has {cnf.num_vars} variables")


def clause_satisfied(clause: Iterable[int], bits: Sequence[int]) -> bool:
    for lit in clause:
        if bits[abs(lit) - 1] == (1 if lit > 0 else 0):
            return True
    return False


def satisfied_vector(cnf: LexCnf, bits: Sequence[int]) -> Bits:
    _check_len(cnf, bits)
    return tuple(1 if clause_satisfied(c, bits) else 0 for c in cnf.clauses)


def flip(bits: Sequence[int], move: Iterable[int]) -> Bits:
    out = list(bits)
    for v in move:
        out[v] ^= 1
    return tuple(out)


class CnfState:
    """Assignment plus per-clause true-literal counts, updated in place.

    A flip set improves the assignment iff the highest-priority clause whose
    status it changes goes from violated to satisfied; that is what
    :meth:`first_change` reports.
    """

    __slots__ = ("cnf", "bits", "count", "violated")

    def __init__(self, cnf: LexCnf, bits: Sequence[int]):
        _check_len(cnf, bits)
        self.cnf = cnf
        self.bits = bytearray(1 if b else 0 for b in bits)
        count = [0] * cnf.m
        for c, clause in enumerate(cnf.clauses):
            for lit in clause:
                if self.bits[abs(lit) - 1] == (1 if lit > 0 else 0):
                    count[c] += 1
        self.count = count
        self.violated = {c for c in range(cnf.m) if count[c] == 0}

    def vector(self) -> Bits:
        return tuple(1 if c else 0 for c in self.count)

    def first_change(self, move: Move) -> Optional[tuple[int, bool]]:
        """(clause index, becomes satisfied) of the first clause the move toggles."""
        occ = self.cnf.occurrences
        bits, count = self.bits, self.count
        if len(move) == 1:
            v = move[0]
            b = bits[v]
            cs, ss = occ[v]
            for c, s in zip(cs, ss):
                if s == b:
                    if count[c] == 1:
                        return c, False
                elif count[c] == 0:
                    return c, True
            return None
        if len(move) != 2:
            raise ValueError("moves flip one or two variables")
        u, v = move
        cu, su = occ[u]
        cv, sv = occ[v]
        bu, bv = bits[u], bits[v]
        i = j = 0
        lu, lv = len(cu), len(cv)
        while i < lu or j < lv:
            if j >= lv or (i < lu and cu[i] < cv[j]):
                c = cu[i]
                delta = -1 if su[i] == bu else 1
                i += 1
            elif i >= lu or cv[j] < cu[i]:
                c = cv[j]
                delta = -1 if sv[j] == bv else 1
                j += 1
            else:
                c = cu[i]
                delta = (-1 if su[i] == bu else 1) + (-1 if sv[j] == bv else 1)
                i += 1
                j += 1
            before = count[c]
            after = before + delta
            if (before > 0) != (after > 0):
                return c, after > 0
        return None

    def is_improving(self, move: Move) -> bool:
        ch = self.first_change(move)
        return ch is not None and ch[1]

    def changes(self, move: Move) -> list[tuple[int, int]]:
        """All (clause, new status) pairs toggled by ``move``, ascending."""
        occ = self.cnf.occurrences
        delta: dict[int, int] = {}
        for v in move:
            cs, ss = occ[v]
            b = self.bits[v]
            for c, s in zip(cs, ss):
                delta[c] = delta.get(c, 0) + (-1 if s == b else 1)
        out = []
        for c in sorted(delta):
            before = self.count[c]
            after = before + delta[c]
            if (before > 0) != (after > 0):
                out.append((c, 1 if after > 0 else 0))
        return out

    def apply(self, move: Move) -> list[tuple[int, int]]:
        """Flip ``move`` in place; returns the toggled (clause, new status) pairs.

        Computed from the count updates alone, independently of
        :meth:`first_change`.
        """
        occ = self.cnf.occurrences
        count, violated = self.count, self.violated
        before = {}
        for v in move:
            cs, ss = occ[v]
            b = self.bits[v]
            for c, s in zip(cs, ss):
                before.setdefault(c, count[c])
                count[c] += -1 if s == b else 1
            self.bits[v] ^= 1
        toggled = []
        for c, was in before.items():
            now = count[c]
            if (was > 0) != (now > 0):
                if now:
                    violated.discard(c)
                else:
                    violated.add(c)
                toggled.append((c, 1 if now else 0))
        toggled.sort()
        return toggled

    def _candidates(self) -> list[int]:
        clauses = self.cnf.clauses
        return sorted({abs(l) - 1 for c in self.violated for l in clauses[c]})

    def improving_move(self, pivot: str = "first") -> Optional[Move]:
        if pivot == "first":
            return self._first_improving()
        if pivot == "best":
            return self._best_improving()
        raise ValueError(f"unknown pivot rule {pivot!r}")

    def _first_improving(self) -> Optional[Move]:
        # An improving move must gain a violated clause, so it touches a
        # variable of one.  Once no single flip improves, an improving pair
        # must additionally share a clause: otherwise its first change is the
        # first change of one of its members.
        if not self.violated:
            return None
        cand = self._candidates()
        for v in cand:
            if self.is_improving((v,)):
                return (v,)
        if self.cnf.d < 2:
            return None
        cnf = self.cnf
        pairs = set()
        for u in cand:
            for w in cnf.cooccurring[u]:
                p = (u, w) if u < w else (w, u)
                if not cnf.is_forbidden(*p):
                    pairs.add(p)
        for p in sorted(pairs):
            if self.is_improving(p):
                return p
        return None

    def _best_improving(self) -> Optional[Move]:
        if not self.violated:
            return None
        current = list(self.vector())
        best_move, best_vec = None, None
        for move in self.cnf.allowed_moves():
            ch = self.changes(move)
            if not ch or not ch[0][1]:
                continue
            vec = list(current)
            for c, s in ch:
                vec[c] = s
            vec = tuple(vec)
            if best_vec is None or vec > best_vec:
                best_move, best_vec = move, vec
        return best_move


def improving_move(cnf: LexCnf, bits: Sequence[int], pivot: str = "first") -> Optional[Move]:
    """First (or best) improving flip set of size <= d, as 0-based indices."""
    return CnfState(cnf, bits).improving_move(pivot)


def is_sat_local_opt(cnf: LexCnf, bits: Sequence[int]) -> bool:
    return improving_move(cnf, bits) is None


# ---------------------------------------------------------------------------
# text format

def format_lexcnf(cnf: LexCnf) -> str:
    lines = [f"p lexcnf {cnf.num_vars} {cnf.m} {cnf.k} {cnf.d}"]
    for clause in cnf.clauses:
        lines.append(" ".join(str(l) for l in clause) + (" 0" if clause else "0"))
    for i, j in sorted(cnf.forbidden):
        lines.append(f"forbid {i} {j}")
    return "\n".join(lines) + "\n"


def parse_lexcnf(text: str) -> LexCnf:
    header = None
    clauses: list[tuple[int, ...]] = []
    forbidden = set()
    for raw in text.splitlines():
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        if toks[0] == "p":
            if len(toks) != 6 or toks[1] != "lexcnf":
                raise CnfError("header must be 'p lexcnf <vars> <clauses> <k> <d>'")
            header = tuple(int(t) for t in toks[2:])
            continue
        if header is None:
            raise CnfError("clause before header")
        if toks[0] == "forbid":
            if len(toks) != 3:
                raise CnfError(f"bad forbid line {raw!r}")
            forbidden.add((int(toks[1]), int(toks[2])))
            continue
        lits = [int(t) for t in toks]
        if lits[-1] != 0 or 0 in lits[:-1]:
            raise CnfError(f"clause line must end in a single 0: {raw!r}")
        clauses.append(tuple(lits[:-1]))
    if header is None:
        raise CnfError("missing header")
    nv, nc, k, d = header
    if nc != len(clauses):
        raise CnfError(f"header announces {nc} clauses, found {len(clauses)}")
    return LexCnf(nv, tuple(clauses), k, d, frozenset(forbidden))
