import random

import pytest
from hypothesis import given, strategies as st

from lexpls.circuit import FlipInstance, is_flip_local_opt, payoff
from lexpls.generate import random_circuit, random_lexcnf
from lexpls.lexcnf import LexCnf, is_sat_local_opt, lex_compare, Ordering, satisfied_vector
from lexpls.search import CnfSearch, ContractViolation, FlipSearch, random_restarts, run_standard


def test_start_already_optimal():
    tr = run_standard(CnfSearch(LexCnf(1, ((1,),), 1), start=(1,)))
    assert tr.steps == 0 and tr.terminated and tr.states == ["1"]


def test_two_unit_clauses():
    tr = run_standard(CnfSearch(LexCnf(2, ((1,), (2,)), 1)))
    assert tr.steps == 2 and tr.terminated
    assert tr.endpoint == (1, 1)
    assert tr.states == ["00", "10", "11"]


def test_max_steps_zero():
    tr = run_standard(CnfSearch(LexCnf(2, ((1,), (2,)), 1)), max_steps=0)
    assert not tr.terminated and tr.steps == 0


def test_negative_max_steps():
    with pytest.raises(ValueError):
        run_standard(CnfSearch(LexCnf(1, ((1,),), 1)), max_steps=-1)


class Liar:
    """Claims every state improves; violates the contract."""

    def start(self):
        return 0

    def improving(self, s):
        return s + 1 if s < 3 else None

    def better(self, new, old):
        return False

    def describe(self, s):
        return str(s)


def test_contract_violation():
    with pytest.raises(ContractViolation):
        run_standard(Liar())
    assert run_standard(Liar(), check=False).steps == 3


@pytest.mark.parametrize("pivot", ["first", "best"])
@pytest.mark.parametrize("seed", range(8))
def test_each_step_improves(seed, pivot):
    rng = random.Random(seed)
    cnf = random_lexcnf(rng, 9, 25, 3, rng.choice((1, 2)), forbid=3 if seed % 2 else 0)
    start = tuple(rng.getrandbits(1) for _ in range(9))
    tr = run_standard(CnfSearch(cnf, start, pivot), record_states=True)
    assert tr.terminated and tr.steps == len(tr.states) - 1
    for a, b in zip(tr.full_states, tr.full_states[1:]):
        assert lex_compare(satisfied_vector(cnf, b), satisfied_vector(cnf, a)) is Ordering.GREATER
    assert is_sat_local_opt(cnf, tr.endpoint)


@given(st.integers(0, 10**6))
def test_deterministic(seed):
    rng = random.Random(seed)
    cnf = random_lexcnf(rng, 8, 20, 3, 2)
    t1 = run_standard(CnfSearch(cnf, (0,) * 8))
    t2 = run_standard(CnfSearch(cnf, (0,) * 8))
    assert t1.format() == t2.format()


def test_flip_search_reaches_local_opt():
    for seed in range(10):
        rng = random.Random(seed)
        flip = FlipInstance(random_circuit(rng, 4, 8, 3))
        tr = run_standard(FlipSearch(flip, (0, 0, 0, 0)), record_states=True)
        assert is_flip_local_opt(flip, tr.endpoint)
        vals = [payoff(flip, x) for x in tr.full_states]
        assert vals == sorted(set(vals))


def test_random_restarts_seeded():
    cnf = random_lexcnf(random.Random(4), 8, 20, 3)
    make = lambda s: CnfSearch(cnf, s)
    a = [t.endpoint for t in random_restarts(make, 8, 10, seed=11)]
    b = [t.endpoint for t in random_restarts(make, 8, 10, seed=11)]
    assert a == b
    assert all(is_sat_local_opt(cnf, e) for e in a)
