import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lexpls.congestion import (
    CongestionGame,
    Exponential,
    GameError,
    Step,
    best_response_dynamics,
    format_game,
    parse_game,
)
from lexpls.generate import random_lexcnf
from lexpls.lexcnf import LexCnf
from lexpls.reductions import assignment_to_profile, reduce_sat_to_congestion
from lexpls.search import CnfSearch, run_standard


def test_empty_strategy_costs_nothing():
    g = CongestionGame(1, (((), (0,)),), (Step(1, Fraction(5)),), 2)
    assert g.player_cost((0,), 0) == 0


def test_full_step_resource():
    alpha = Fraction(2)
    g = CongestionGame(1, (((0,),),) * 4, (Step(4, (1 + alpha) ** 1),), alpha)
    assert all(g.player_cost((0, 0, 0, 0), i) == 3 for i in range(4))


def test_hand_built_three_players():
    # d0(k) = 2**(k-1), d1(k) = 3 from two players on
    delays = (Exponential(Fraction(2), 1, -1), Step(2, Fraction(3)))
    strat = (((0,), (1,)), ((0, 1), (1,)), ((0,),))
    g = CongestionGame(2, strat, delays, Fraction(3, 2))
    prof = (0, 0, 0)  # loads: r0 = 3, r1 = 1
    assert g.loads(prof) == [3, 1]
    assert g.player_cost(prof, 0) == 4
    assert g.player_cost(prof, 1) == 4 + 0
    assert g.player_cost(prof, 2) == 4
    prof = (1, 0, 0)  # r0 = 2, r1 = 2
    assert g.player_cost(prof, 0) == 3
    assert g.player_cost(prof, 1) == 2 + 3


def _exact_improving(g, prof):
    for i in range(g.num_players):
        for c in range(len(g.strategies[i])):
            if c != prof[i]:
                alt = prof[:i] + (c,) + prof[i + 1:]
                if g.player_cost(prof, i) > g.player_cost(alt, i):
                    return i, c
    return None


def test_alpha_near_one_is_exact_nash():
    # two players, two resources; cost = load^2 style via exponential base 2
    d = (Exponential(Fraction(2), 1, 0), Exponential(Fraction(2), 1, 0))
    g = CongestionGame(2, (((0,), (1,)), ((0,), (1,))), d, Fraction(1) + Fraction(1, 10**9))
    for prof in itertools.product(range(2), repeat=2):
        assert (g.alpha_improving_move(prof) is None) == (_exact_improving(g, prof) is None)


def test_equilibrium_has_no_move():
    d = (Exponential(Fraction(2), 1, 0), Exponential(Fraction(2), 1, 0))
    g = CongestionGame(2, (((0,), (1,)), ((0,), (1,))), d, 2)
    assert g.is_alpha_nash((0, 1))
    assert g.alpha_improving_move((0, 1)) is None


def test_tie_is_not_improving():
    # cost 4 vs alternative 2 with alpha 2: 4 <= 2 * 2, so no move
    g = CongestionGame(2, (((0,), (1,)),), (Step(1, Fraction(4)), Step(1, Fraction(2))), 2)
    assert g.is_alpha_nash((0,))
    g = CongestionGame(2, (((0,), (1,)),), (Step(1, Fraction(5)), Step(1, Fraction(2))), 2)
    assert g.alpha_improving_move((0,)) == (0, 1)


def test_single_unit_clause_reduction():
    g, _ = reduce_sat_to_congestion(LexCnf(1, ((1,),), 1), 2)
    # all-false profile: x1 sits on the clause, cost (1+2)^1 = 3 vs 0
    assert g.player_cost((0,), 0) == 3
    assert g.alpha_improving_move((0,)) == (0, 1)
    assert not g.is_alpha_nash((0,))
    assert g.is_alpha_nash((1,))


def test_brd_examples():
    g, _ = reduce_sat_to_congestion(LexCnf(1, ((1,),), 1), 2)
    assert best_response_dynamics(g, (1,)).steps == 0
    g, _ = reduce_sat_to_congestion(LexCnf(2, ((1,), (2,)), 1), 2)
    tr = best_response_dynamics(g, (0, 0))
    assert tr.terminated and tr.endpoint == (1, 1) and tr.steps <= 2


@pytest.mark.parametrize("seed", range(12))
def test_brd_matches_lexcnf_standard_algorithm(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 8)
    cnf = random_lexcnf(rng, n, rng.randint(1, 12), 4)
    start = tuple(rng.getrandbits(1) for _ in range(n))
    alpha = rng.choice((Fraction(3, 2), Fraction(2), Fraction(10)))
    g, _ = reduce_sat_to_congestion(cnf, alpha, "step")
    sat = run_standard(CnfSearch(cnf, start))
    game = best_response_dynamics(g, assignment_to_profile(g, start))
    assert game.steps == sat.steps
    assert game.endpoint == sat.endpoint


def test_rejects_bad_games():
    with pytest.raises(GameError):
        CongestionGame(1, (((0,),),), (Step(1, Fraction(1)),), Fraction(1, 2))
    with pytest.raises(GameError):
        CongestionGame(1, (((1,),),), (Step(1, Fraction(1)),), 2)
    with pytest.raises(GameError):
        CongestionGame(1, (((0,),),), (Step(1, Fraction(-1)),), 2)


@given(st.integers(0, 10**6))
def test_potential_drops_on_improving_moves(seed):
    rng = random.Random(seed)
    cnf = random_lexcnf(rng, 4, 6, 4)
    g, _ = reduce_sat_to_congestion(cnf, Fraction(3, 2), rng.choice(("step", "exponential")))
    prof = assignment_to_profile(g, tuple(rng.getrandbits(1) for _ in range(4)))
    mv = g.alpha_improving_move(prof)
    if mv is not None:
        i, c = mv
        new = prof[:i] + (c,) + prof[i + 1:]
        assert g.potential(new) < g.potential(prof)
        assert g.player_cost(prof, i) > g.alpha * g.player_cost(new, i)


@pytest.mark.parametrize("kind", ["step", "exponential"])
def test_text_roundtrip(kind):
    cnf = LexCnf(3, ((1, -2), (3,), (-1, 2, -3)), 3)
    g, _ = reduce_sat_to_congestion(cnf, Fraction(3, 2), kind)
    text = format_game(g)
    assert parse_game(text) == g
    assert format_game(parse_game(text)) == text
