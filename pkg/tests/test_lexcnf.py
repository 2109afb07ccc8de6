import itertools
import random

import pytest
from hypothesis import given, strategies as st

from lexpls.generate import random_lexcnf
from lexpls.lexcnf import (
    CnfError,
    CnfState,
    LexCnf,
    Ordering,
    flip,
    format_lexcnf,
    improving_move,
    is_sat_local_opt,
    lex_compare,
    parse_lexcnf,
    satisfied_vector,
)

from conftest import all_bits


def brute_moves(cnf):
    n = cnf.num_vars
    moves = [(i,) for i in range(n)]
    if cnf.d == 2:
        moves += [(i, j) for i, j in itertools.combinations(range(n), 2) if not cnf.is_forbidden(i, j)]
    return moves


def brute_vector(cnf, bits):
    return tuple(int(any((bits[abs(l) - 1] == 1) == (l > 0) for l in c)) for c in cnf.clauses)


def brute_first(cnf, bits):
    here = brute_vector(cnf, bits)
    for mv in brute_moves(cnf):
        if brute_vector(cnf, flip(bits, mv)) > here:
            return mv
    return None


def brute_best(cnf, bits):
    here, best, bv = brute_vector(cnf, bits), None, None
    for mv in brute_moves(cnf):
        v = brute_vector(cnf, flip(bits, mv))
        if v > here and (bv is None or v > bv):
            best, bv = mv, v
    return best


def test_satisfied_vector_examples():
    assert satisfied_vector(LexCnf(1, (), 1), (0,)) == ()
    assert satisfied_vector(LexCnf(1, ((1,), (-1,)), 1), (1,)) == (1, 0)
    cnf = LexCnf(2, ((1, 2), (-1, 2), (-2,)), 2)
    assert satisfied_vector(cnf, (1, 0)) == (1, 0, 1)


def test_lex_compare_examples():
    assert lex_compare((1, 0, 1), (1, 1, 0)) is Ordering.LESS
    assert lex_compare((1, 0, 1), (1, 0, 1)) is Ordering.EQUAL
    assert lex_compare((0, 1, 1, 1), (1, 0, 0, 0)) is Ordering.LESS
    with pytest.raises(CnfError):
        lex_compare((1,), (1, 0))


def test_improving_move_examples():
    assert improving_move(LexCnf(1, ((1,),), 1), (0,)) == (0,)
    assert improving_move(LexCnf(1, ((1,),), 1), (1,)) is None


def test_improving_move_two_flip_example():
    cnf = LexCnf(2, ((1, 2), (-1,), (-2,)), 2, 2)
    # frozen from the brute-force scan: flipping x1 gives (1,1,0), the largest
    # reachable vector, and it is also first in scan order
    assert brute_first(cnf, (1, 1)) == (0,)
    assert brute_best(cnf, (1, 1)) == (0,)
    assert improving_move(cnf, (1, 1)) == (0,)
    assert improving_move(cnf, (1, 1), "best") == (0,)
    assert satisfied_vector(cnf, (0, 1)) == (1, 1, 0)
    # flipping x2 alone is improving too, but ranks lower
    assert satisfied_vector(cnf, (1, 0)) == (1, 0, 1)


def test_local_opt_examples():
    assert all(is_sat_local_opt(LexCnf(2, (), 1), a) for a in all_bits(2))
    assert is_sat_local_opt(LexCnf(1, ((1,),), 1), (1,))


def test_invariants_enforced():
    with pytest.raises(CnfError):
        LexCnf(2, ((1, -1),), 2)
    with pytest.raises(CnfError):
        LexCnf(2, ((1, 1),), 2)
    with pytest.raises(CnfError):
        LexCnf(3, ((1, 2, 3),), 2)
    with pytest.raises(CnfError):
        LexCnf(2, ((1,),), 1, 3)
    with pytest.raises(CnfError):
        LexCnf(2, ((3,),), 1)


def _random(seed, n=6, m=10, d=None):
    rng = random.Random(seed)
    d = d or rng.choice((1, 2))
    return random_lexcnf(rng, n, m, 3, d, forbid=rng.randint(0, 4) if d == 2 else 0), rng


@pytest.mark.parametrize("seed", range(20))
def test_agrees_with_brute_force(seed):
    cnf, _ = _random(seed)
    for a in all_bits(cnf.num_vars):
        assert improving_move(cnf, a) == brute_first(cnf, a)
        assert improving_move(cnf, a, "best") == brute_best(cnf, a)
        assert is_sat_local_opt(cnf, a) == (brute_first(cnf, a) is None)


@given(st.integers(0, 10**6))
def test_incremental_matches_scratch(seed):
    cnf, rng = _random(seed, n=7, m=14)
    bits = tuple(rng.getrandbits(1) for _ in range(cnf.num_vars))
    ev = CnfState(cnf, bits)
    for _ in range(30):
        mv = tuple(sorted(rng.sample(range(cnf.num_vars), rng.randint(1, 2))))
        before = ev.vector()
        toggled = ev.apply(mv)
        bits = flip(bits, mv)
        assert ev.vector() == satisfied_vector(cnf, bits)
        assert [c for c, _ in toggled] == [c for c in range(cnf.m) if before[c] != ev.vector()[c]]


@given(st.integers(0, 10**6))
def test_never_returns_forbidden(seed):
    rng = random.Random(seed)
    cnf = random_lexcnf(rng, 5, 8, 3, 2, forbid=6)
    for a in all_bits(5):
        mv = improving_move(cnf, a)
        if mv is not None and len(mv) == 2:
            assert not cnf.is_forbidden(*mv)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=8).flatmap(
    lambda u: st.tuples(st.just(u), st.lists(st.integers(0, 1), min_size=len(u), max_size=len(u)))))
def test_lex_compare_matches_weights(pair):
    u, v = pair
    m = len(u)
    wu = sum(b << (m - 1 - i) for i, b in enumerate(u))
    wv = sum(b << (m - 1 - i) for i, b in enumerate(v))
    assert int(lex_compare(u, v)) == (wu > wv) - (wu < wv)


def test_text_roundtrip():
    cnf = LexCnf(4, ((1, -2), (3,), (-4, 2, 1)), 3, 2, frozenset({(1, 3), (2, 4)}))
    text = format_lexcnf(cnf)
    assert text == "p lexcnf 4 3 3 2\n1 -2 0\n3 0\n-4 2 1 0\nforbid 1 3\nforbid 2 4\n"
    assert parse_lexcnf(text) == cnf


@given(st.integers(0, 10**6))
def test_text_roundtrip_random(seed):
    cnf, _ = _random(seed)
    assert parse_lexcnf(format_lexcnf(cnf)) == cnf


@pytest.mark.parametrize("text", ["p lexcnf 2 1 2 1\n1 2\n", "1 0\n", "p lexcnf 2 2 2 1\n1 0\n",
                                  "p cnf 2 1\n1 0\n"])
def test_text_rejects(text):
    with pytest.raises(CnfError):
        parse_lexcnf(text)
