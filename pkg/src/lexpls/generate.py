"""Seeded random instances for tests, benchmarks and the ``gen`` subcommand."""
from __future__ import annotations

import random

from .circuit import Circuit
from .lexcnf import LexCnf


def random_circuit(rng: random.Random, n: int, gates: int, outputs: int = 1) -> Circuit:
    """Uniform operands over earlier nodes; outputs drawn from the last gates."""
    if n < 1 or gates < 1 or outputs < 1:
        raise ValueError("need n >= 1, gates >= 1 and outputs >= 1")
    gl = []
    for j in range(gates):
        gl.append((rng.randrange(n + j), rng.randrange(n + j)))
    pool = list(range(max(0, gates - 2 * outputs), gates))
    if len(pool) >= outputs:
        outs = rng.sample(pool, outputs)
    else:
        outs = [rng.choice(pool) for _ in range(outputs)]
    return Circuit(n, tuple(gl), tuple(outs))


def random_clause(rng: random.Random, n: int, width: int) -> tuple[int, ...]:
    vs = rng.sample(range(1, n + 1), width)
    return tuple(v if rng.getrandbits(1) else -v for v in vs)


def random_lexcnf(
    rng: random.Random,
    n: int,
    m: int,
    k: int,
    d: int = 1,
    min_width: int = 1,
    cover_all: bool = False,
    forbid: int = 0,
) -> LexCnf:
    """Clause widths uniform in ``[min_width, k]`` (capped at n).

    ``cover_all`` retries until every variable occurs; ``forbid`` draws that
    many forbidden pairs.
    """
    if n < 1 or m < 0 or k < 1:
        raise ValueError("need n >= 1, m >= 0, k >= 1")
    lo, hi = min(min_width, n), min(k, n)
    for _ in range(1000):
        clauses = tuple(random_clause(rng, n, rng.randint(lo, hi)) for _ in range(m))
        if not cover_all or {abs(l) for c in clauses for l in c} == set(range(1, n + 1)):
            break
    else:
        raise ValueError("could not cover every variable; raise m or k")
    pairs = set()
    all_pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    if forbid:
        pairs = set(rng.sample(all_pairs, min(forbid, len(all_pairs))))
    return LexCnf(n, clauses, k, d, frozenset(pairs))
