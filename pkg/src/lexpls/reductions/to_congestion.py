"""Lexicographic SAT/1-FLIP compiled into an approximate-equilibrium congestion game.

Player ``x`` chooses between ``false`` (the clauses containing ``x``) and
``true`` (the clauses containing ``¬x``), so a player sits on a clause
resource exactly when its literal there is false; a clause is violated iff
its resource is fully loaded.  Resource weights count ``j = 1`` at the lowest
priority clause up to ``j = m`` at the highest.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..congestion import CongestionGame, Exponential, Step
from ..lexcnf import LexCnf
from .mapping import AuditError, ExtractionError, SolutionMapping

DELAY_KINDS = ("step", "exponential")
FULL_LOAD = 4


def clause_weight_index(m: int, r: int) -> int:
    """``j`` of the clause at 0-based priority position ``r``."""
    return m - r


def reduce_sat_to_congestion(cnf: LexCnf, alpha, kind: str = "step") -> tuple[CongestionGame, SolutionMapping]:
    alpha = Fraction(alpha)
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    if kind not in DELAY_KINDS:
        raise ValueError(f"delay kind must be one of {DELAY_KINDS}")
    if cnf.d != 1:
        raise ValueError("the congestion compiler takes a 1-flip formula")
    m, n = len(cnf.clauses), cnf.num_vars
    for idx, c in enumerate(cnf.clauses):
        if not 1 <= len(c) <= FULL_LOAD:
            raise ValueError(f"clause {idx + 1} has width {len(c)}; widths 1..{FULL_LOAD} are supported")
    base = 1 + alpha
    strategies = []
    for x in range(1, n + 1):
        false = tuple(r for r, c in enumerate(cnf.clauses) if x in c)
        true = tuple(r for r, c in enumerate(cnf.clauses) if -x in c)
        strategies.append((false, true))
    delays = []
    dummies = 0
    for r, c in enumerate(cnf.clauses):
        j = clause_weight_index(m, r)
        if kind == "step":
            delays.append(Step(len(c), base ** j))
        else:
            delays.append(Exponential(base, m, j))
            for _ in range(FULL_LOAD - len(c)):
                strategies.append(((r,),))
                dummies += 1
    game = CongestionGame(m, tuple(strategies), tuple(delays), alpha)
    mapping = SolutionMapping(f"sat-congestion-{kind}")
    mapping.meta.update(n=str(n), m=str(m), alpha=f"{alpha.numerator}/{alpha.denominator}", dummies=str(dummies))
    for x in range(n):
        mapping.add(f"x{x + 1}", f"P{x + 1}")
    for r in range(m):
        mapping.add(f"C{r + 1}", f"R{r + 1}")
    audit_congestion(cnf, game, mapping)
    return game, mapping


def audit_congestion(cnf: LexCnf, game: CongestionGame, mapping: SolutionMapping) -> None:
    m, n = len(cnf.clauses), cnf.num_vars
    kind = mapping.kind.rsplit("-", 1)[1]
    if game.num_resources != m:
        raise AuditError("one resource per clause expected")
    dummies = sum(FULL_LOAD - len(c) for c in cnf.clauses) if kind == "exponential" else 0
    if game.num_players != n + dummies:
        raise AuditError(f"{game.num_players} players, expected {n + dummies}")
    # a violated clause loads its resource fully: width players in step form, 4 with dummies
    full = [0] * m
    for r, c in enumerate(cnf.clauses):
        full[r] = len(c) if kind == "step" else FULL_LOAD
    for r, d in enumerate(game.delays):
        j = clause_weight_index(m, r)
        if kind == "step" and (d.threshold != full[r] or d.value != (1 + game.alpha) ** j):
            raise AuditError(f"resource {r + 1} delay is not (1+alpha)^{j} at width {full[r]}")
        if kind == "exponential" and not (d.slope == m and d.offset == j):
            raise AuditError(f"resource {r + 1} delay exponent is not k*m + {j}")


def profile_to_assignment(profile: Sequence[int], n: int) -> tuple[int, ...]:
    return tuple(profile[:n])


def assignment_to_profile(game: CongestionGame, bits: Sequence[int]) -> tuple[int, ...]:
    """Variables map to their strategy index; dummy players take their only strategy."""
    return tuple(bits) + (0,) * (game.num_players - len(bits))


def extract_congestion(mapping: SolutionMapping, profile: Sequence[int]) -> tuple[int, ...]:
    n = int(mapping.meta["n"])
    dummies = int(mapping.meta["dummies"])
    if len(profile) != n + dummies:
        raise ExtractionError(f"profile has {len(profile)} entries, expected {n + dummies}")
    out = []
    for x in range(n):
        c = profile[mapping.index(f"x{x + 1}") - 1]
        if c not in (0, 1):
            raise ExtractionError(f"player x{x + 1} has strategy {c}; only false=0 and true=1 exist")
        out.append(c)
    if any(c != 0 for c in profile[n:]):
        raise ExtractionError("dummy players have a single strategy (index 0)")
    return tuple(out)
