"""Congestion games with step and exponential delays, and approximate equilibria.

All equilibrium decisions are exact: delay tables are scaled to integers over
one common denominator at construction, so comparing ``C_i(s) > alpha *
C_i(s')`` is integer arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Optional, Sequence, Union

from .search import DEFAULT_MAX_STEPS, SearchTrace, run_standard

Profile = tuple[int, ...]


class GameError(ValueError):
    pass


@dataclass(frozen=True)
class Step:
    """0 below ``threshold`` players, ``value`` from there on."""

    threshold: int
    value: Fraction

    def __call__(self, load: int) -> Fraction:
        return Fraction(self.value) if load >= self.threshold else Fraction(0)


@dataclass(frozen=True)
class Exponential:
    """``base ** (slope * load + offset)`` for load >= 1, and 0 for an unused resource."""

    base: Fraction
    slope: int
    offset: int

    def __call__(self, load: int) -> Fraction:
        if load <= 0:
            return Fraction(0)
        return Fraction(self.base) ** (self.slope * load + self.offset)


Delay = Union[Step, Exponential]


@dataclass(frozen=True)
class CongestionGame:
    """``strategies[i]`` is player i's list of resource subsets (as sorted tuples)."""

    num_resources: int
    strategies: tuple[tuple[tuple[int, ...], ...], ...]
    delays: tuple[Delay, ...]
    alpha: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.alpha < 1:
            raise GameError("alpha must be at least 1")
        if len(self.delays) != self.num_resources:
            raise GameError("one delay function per resource")
        for i, strats in enumerate(self.strategies):
            if not strats:
                raise GameError(f"player {i + 1} has no strategy")
            for s in strats:
                if len(set(s)) != len(s) or any(not 0 <= r < self.num_resources for r in s):
                    raise GameError(f"player {i + 1} has a malformed strategy {s}")
        for r, d in enumerate(self.delays):
            prev = Fraction(0)
            for k in range(self.num_players + 1):
                cur = d(k)
                if cur < 0 or cur < prev:
                    raise GameError(f"delay of resource {r + 1} is negative or decreasing")
                prev = cur

    @property
    def num_players(self) -> int:
        return len(self.strategies)

    @cached_property
    def _tables(self) -> tuple[list[list[int]], int]:
        # tables[r][k] = D * d_r(k) for loads 0..P, as integers
        raw = [[d(k) for k in range(self.num_players + 1)] for d in self.delays]
        den = 1
        for row in raw:
            for q in row:
                den = lcm(den, q.denominator)
        return [[int(q * den) for q in row] for row in raw], den

    def check_profile(self, profile: Sequence[int]) -> None:
        if len(profile) != self.num_players:
            raise GameError("profile length differs from the player count")
        for i, c in enumerate(profile):
            if not 0 <= c < len(self.strategies[i]):
                raise GameError(f"player {i + 1} has no strategy {c}")

    def loads(self, profile: Sequence[int]) -> list[int]:
        load = [0] * self.num_resources
        for i, c in enumerate(profile):
            for r in self.strategies[i][c]:
                load[r] += 1
        return load

    def _scaled_cost(self, load: Sequence[int], resources: Sequence[int]) -> int:
        tab = self._tables[0]
        return sum(tab[r][load[r]] for r in resources)

    def player_cost(self, profile: Sequence[int], i: int) -> Fraction:
        self.check_profile(profile)
        load = self.loads(profile)
        return Fraction(self._scaled_cost(load, self.strategies[i][profile[i]]), self._tables[1])

    def deviation_cost(self, profile: Sequence[int], i: int, c: int) -> Fraction:
        """Cost of player i after switching alone to strategy c."""
        return self.player_cost(tuple(profile[:i]) + (c,) + tuple(profile[i + 1:]), i)

    def _deviation_scaled(self, load: list[int], cur: Sequence[int], new: Sequence[int]) -> int:
        cur_set = set(cur)
        tab = self._tables[0]
        total = 0
        for r in new:
            total += tab[r][load[r] + (0 if r in cur_set else 1)]
        return total

    def alpha_improving_move(self, profile: Sequence[int]) -> Optional[tuple[int, int]]:
        """First ``(player, strategy)`` with ``C_i(s) > alpha * C_i(s')``; players then strategies ascending."""
        self.check_profile(profile)
        load = self.loads(profile)
        a, b = self.alpha.numerator, self.alpha.denominator
        for i, c in enumerate(profile):
            cur = self.strategies[i][c]
            here = self._scaled_cost(load, cur)
            if here == 0:
                continue
            for c2, new in enumerate(self.strategies[i]):
                if c2 == c:
                    continue
                there = self._deviation_scaled(load, cur, new)
                if here * b > a * there:
                    return i, c2
        return None

    def is_alpha_nash(self, profile: Sequence[int]) -> bool:
        return self.alpha_improving_move(profile) is None

    def potential(self, profile: Sequence[int]) -> Fraction:
        """Rosenthal potential."""
        load = self.loads(profile)
        tab, den = self._tables
        return Fraction(sum(sum(tab[r][1:load[r] + 1]) for r in range(self.num_resources)), den)


class GameSearch:
    """Best-response style dynamics: one alpha-improving unilateral switch per step."""

    def __init__(self, game: CongestionGame, start: Sequence[int]):
        game.check_profile(start)
        self.game = game
        self._start = tuple(start)

    def start(self):
        return self._start

    def improving(self, profile):
        mv = self.game.alpha_improving_move(profile)
        if mv is None:
            return None
        i, c = mv
        return profile[:i] + (c,) + profile[i + 1:]

    def better(self, new, old) -> bool:
        diff = [i for i in range(len(old)) if new[i] != old[i]]
        if len(diff) != 1:
            return False
        i = diff[0]
        return self.game.player_cost(old, i) > self.game.alpha * self.game.player_cost(new, i)

    def describe(self, profile) -> str:
        return " ".join(map(str, profile))


def best_response_dynamics(game: CongestionGame, start: Sequence[int], max_steps: int = DEFAULT_MAX_STEPS) -> SearchTrace:
    return run_standard(GameSearch(game, start), max_steps=max_steps)


# ---------------------------------------------------------------------------
# text format

def _frac(text: str) -> Fraction:
    return Fraction(text)


def _fmt_frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_game(game: CongestionGame) -> str:
    kinds = {type(d) for d in game.delays}
    kind = "step" if kinds <= {Step} else "exp" if kinds <= {Exponential} else "mixed"
    lines = [f"p cgame {game.num_players} {game.num_resources} {_fmt_frac(game.alpha)} {kind}"]
    for d in game.delays:
        if isinstance(d, Step):
            lines.append(f"d step {d.threshold} {_fmt_frac(Fraction(d.value))}")
        else:
            lines.append(f"d exp {_fmt_frac(Fraction(d.base))} {d.slope} {d.offset}")
    for i, strats in enumerate(game.strategies):
        for s in strats:
            lines.append(" ".join(["s", str(i + 1)] + [str(r + 1) for r in s]))
    return "\n".join(lines) + "\n"


def parse_game(text: str) -> CongestionGame:
    header = None
    delays: list[Delay] = []
    strats: dict[int, list[tuple[int, ...]]] = {}
    for raw in text.splitlines():
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        try:
            if toks[0] == "p":
                if len(toks) != 6 or toks[1] != "cgame":
                    raise GameError("header must be 'p cgame <players> <resources> <a>/<b> <kind>'")
                header = (int(toks[2]), int(toks[3]), _frac(toks[4]), toks[5])
            elif toks[0] == "d" and toks[1] == "step" and len(toks) == 4:
                delays.append(Step(int(toks[2]), _frac(toks[3])))
            elif toks[0] == "d" and toks[1] == "exp" and len(toks) == 5:
                delays.append(Exponential(_frac(toks[2]), int(toks[3]), int(toks[4])))
            elif toks[0] == "s" and len(toks) >= 2:
                strats.setdefault(int(toks[1]) - 1, []).append(tuple(sorted(int(t) - 1 for t in toks[2:])))
            else:
                raise GameError(f"unknown line {raw!r}")
        except (IndexError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, GameError):
                raise
            raise GameError(f"bad line {raw!r}: {exc}") from None
    if header is None:
        raise GameError("missing header")
    P, R, alpha, _ = header
    if sorted(strats) != list(range(P)):
        raise GameError("every player needs at least one strategy line")
    return CongestionGame(R, tuple(tuple(strats[i]) for i in range(P)), tuple(delays), alpha)


def format_profile(profile: Sequence[int]) -> str:
    return "profile " + " ".join(map(str, profile)) + "\n"


def parse_profile(text: str) -> Profile:
    toks = text.split()
    if not toks or toks[0] != "profile":
        raise GameError("profile line must start with 'profile'")
    return tuple(int(t) for t in toks[1:])
