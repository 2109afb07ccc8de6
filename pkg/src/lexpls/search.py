"""The standard local-search algorithm: keep taking improving moves until none exist."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional, Protocol, Sequence

from .circuit import FlipInstance, flip_bit, payoff
from .lexcnf import CnfState, LexCnf, Ordering, lex_compare, satisfied_vector

DEFAULT_MAX_STEPS = 10**6


class ContractViolation(RuntimeError):
    """``improving`` returned a state that is not strictly better."""


class SearchProblem(Protocol):
    def start(self) -> Any: ...

    def improving(self, state: Any) -> Optional[Any]: ...

    def describe(self, state: Any) -> str: ...

    def better(self, new: Any, old: Any) -> bool: ...


@dataclass
class SearchTrace:
    states: list[str]
    steps: int
    endpoint: Any
    terminated: bool
    full_states: Optional[list[Any]] = field(default=None, repr=False)

    def format(self) -> str:
        head = f"steps {self.steps} terminated {int(self.terminated)}"
        return "\n".join([head] + [f"state {s}" for s in self.states]) + "\n"


def run_standard(
    problem: SearchProblem,
    max_steps: int = DEFAULT_MAX_STEPS,
    record_trace: bool = True,
    record_states: bool = False,
    check: bool = True,
) -> SearchTrace:
    """Iterate ``problem.improving`` from ``problem.start()``.

    ``terminated`` is true iff the endpoint has no improving neighbor.  With
    ``record_trace`` off only the endpoint token is kept.  ``check`` asks the
    problem to confirm every step is a strict improvement.
    """
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    cur = problem.start()
    tokens = [problem.describe(cur)] if record_trace else []
    full = [cur] if record_states else None
    steps = 0
    terminated = False
    while True:
        nxt = problem.improving(cur)
        if nxt is None:
            terminated = True
            break
        if steps >= max_steps:
            break
        if check and not problem.better(nxt, cur):
            raise ContractViolation(
                f"step {steps + 1}: {problem.describe(nxt)} does not improve on {problem.describe(cur)}"
            )
        cur = nxt
        steps += 1
        if record_trace:
            tokens.append(problem.describe(cur))
        if full is not None:
            full.append(cur)
    if not record_trace:
        tokens = [problem.describe(cur)]
    return SearchTrace(tokens, steps, cur, terminated, full)


def bitstring(bits: Iterable[int]) -> str:
    return "".join("1" if b else "0" for b in bits)


class CnfSearch:
    """Lexicographic k-SAT/d-FLIP as a search problem over 0/1 tuples.

    Keeps one incremental evaluator synced to the last state it produced, so a
    step costs time proportional to the touched clauses rather than the
    formula size.
    """

    def __init__(self, cnf: LexCnf, start: Optional[Sequence[int]] = None, pivot: str = "first"):
        self.cnf = cnf
        self.pivot = pivot
        self._start = tuple(start) if start is not None else (0,) * cnf.num_vars
        if len(self._start) != cnf.num_vars:
            raise ValueError("start assignment has the wrong length")
        self._cursor: Optional[tuple[tuple, CnfState]] = None
        self._last: Optional[tuple[tuple, tuple, list]] = None

    def start(self):
        return self._start

    def _state_for(self, bits) -> CnfState:
        if self._cursor is not None and self._cursor[0] is bits:
            return self._cursor[1]
        return CnfState(self.cnf, bits)

    def improving(self, bits):
        ev = self._state_for(bits)
        move = ev.improving_move(self.pivot)
        if move is None:
            self._cursor = (bits, ev)
            return None
        toggled = ev.apply(move)
        new = tuple(ev.bits)
        self._cursor = (new, ev)
        self._last = (bits, new, toggled)
        return new

    def better(self, new, old) -> bool:
        if self._last is not None and self._last[0] is old and self._last[1] is new:
            toggled = self._last[2]
            return bool(toggled) and toggled[0][1] == 1
        return lex_compare(satisfied_vector(self.cnf, new), satisfied_vector(self.cnf, old)) is Ordering.GREATER

    def describe(self, bits) -> str:
        return bitstring(bits)


class FlipSearch:
    """FLIP: maximize the circuit payoff over single input-bit flips."""

    def __init__(self, flip: FlipInstance, start: Optional[Sequence[int]] = None, pivot: str = "first"):
        self.flip = flip
        self.pivot = pivot
        self._start = tuple(start) if start is not None else (0,) * flip.n

    def start(self):
        return self._start

    def improving(self, x):
        here = payoff(self.flip, x)
        best, best_val = None, here
        for i in range(self.flip.n):
            y = flip_bit(x, i)
            val = payoff(self.flip, y)
            if val > best_val:
                if self.pivot == "first":
                    return y
                best, best_val = y, val
        return best

    def better(self, new, old) -> bool:
        return payoff(self.flip, new) > payoff(self.flip, old)

    def describe(self, x) -> str:
        return bitstring(x)


def random_bits(rng: random.Random, n: int) -> tuple[int, ...]:
    return tuple(rng.getrandbits(1) for _ in range(n))


def random_restarts(
    make_problem: Callable[[tuple[int, ...]], SearchProblem],
    width: int,
    restarts: int,
    seed: int,
    max_steps: int = DEFAULT_MAX_STEPS,
    check: bool = True,
) -> list[SearchTrace]:
    """Run the standard algorithm from ``restarts`` seeded random bit-string starts.

    Trajectories are independent; only endpoints are recorded.
    """
    rng = random.Random(seed)
    starts = [random_bits(rng, width) for _ in range(restarts)]
    return [
        run_standard(make_problem(s), max_steps=max_steps, record_trace=False, check=check)
        for s in starts
    ]
