"""Lexicographic SAT/1-FLIP compiled into permutation orbit minimization.

Abelian form: one block of ``2^|C|`` positions per clause, one position per
local assignment of the clause's variables, and one involution per variable
that flips that variable's bit inside every block.  Violating positions get
the highest priorities, in clause order.

Cyclic form: one cycle per variable (length = its prime) and one per clause
(length = product of its variables' primes).  Every generator is a power of
the single permutation that rotates all cycles by one.
"""
from __future__ import annotations

from typing import Sequence

from ..lexcnf import LexCnf
from ..plom import OrbitState, Permutation, PlomInstance, compose, crt_decode, first_primes
from .mapping import AuditError, ExtractionError, SolutionMapping

MAX_CYCLIC_WIDTH = 4


def _bits_label(bits: Sequence[int]) -> str:
    return "".join(map(str, bits))


def _violating(clause: Sequence[int]) -> tuple[int, ...]:
    """The unique local assignment falsifying the clause."""
    return tuple(0 if lit > 0 else 1 for lit in clause)


def _clause_vars(cnf: LexCnf) -> list[list[int]]:
    out = []
    for idx, c in enumerate(cnf.clauses):
        if not c:
            raise ValueError(f"clause {idx + 1} is empty; it has no local assignments")
        out.append([abs(l) - 1 for l in c])
    return out


def _abelian_layout(cnf: LexCnf):
    """Storage index of every (clause, local assignment) position."""
    cvars = _clause_vars(cnf)
    stor: dict[tuple[int, int], int] = {}
    for c, clause in enumerate(cnf.clauses):
        b = int(_bits_label(_violating(clause)), 2)
        stor[(c, b)] = c
    nxt = len(cnf.clauses)
    for c, clause in enumerate(cnf.clauses):
        for b in range(2 ** len(clause)):
            if (c, b) not in stor:
                stor[(c, b)] = nxt
                nxt += 1
    return cvars, stor, nxt


def _variable_involution(cnf: LexCnf, cvars, stor, N: int, x: int) -> Permutation:
    img = list(range(N))
    for c, vs in enumerate(cvars):
        if x not in vs:
            continue
        w = len(vs)
        bit = 1 << (w - 1 - vs.index(x))
        for b in range(2 ** w):
            img[stor[(c, b)]] = stor[(c, b ^ bit)]
    return Permutation(tuple(img))


def _abelian(cnf: LexCnf, kind: str, pairs: Sequence[tuple[int, int]]) -> tuple[PlomInstance, SolutionMapping]:
    cvars, stor, N = _abelian_layout(cnf)
    init = [0] * N
    for c in range(len(cnf.clauses)):
        init[stor[(c, 0)]] = 1
    singles = [_variable_involution(cnf, cvars, stor, N, x) for x in range(cnf.num_vars)]
    gens = list(singles) + [compose(singles[a], singles[b]) for a, b in pairs]
    prio = tuple(range(N))
    inst = PlomInstance(N, tuple(init), "abelian-involution", tuple(gens), priority=prio)

    mapping = SolutionMapping(kind)
    mapping.meta["n"] = str(cnf.num_vars)
    mapping.meta["m"] = str(len(cnf.clauses))
    for c, vs in enumerate(cvars):
        mapping.meta[f"vars.C{c + 1}"] = " ".join(str(v + 1) for v in vs)
    for x in range(cnf.num_vars):
        mapping.add(f"x{x + 1}", f"g{x + 1}")
    for k, (a, b) in enumerate(pairs):
        mapping.add(f"x{a + 1}+x{b + 1}", f"g{cnf.num_vars + k + 1}")
    for (c, b), p in sorted(stor.items()):
        w = len(cvars[c])
        mapping.add(f"C{c + 1}@{b:0{w}b}", f"p{p}")
    audit_abelian(cnf, inst, mapping)
    return inst, mapping


def reduce_sat_to_abelian_plom(cnf: LexCnf) -> tuple[PlomInstance, SolutionMapping]:
    if cnf.d != 1:
        raise ValueError("the abelian compiler takes a 1-flip formula; use the 2-flip variant for d=2")
    return _abelian(cnf, "sat-abelian-plom", ())


def reduce_sat_to_abelian_plom_2flip(cnf: LexCnf) -> tuple[PlomInstance, SolutionMapping]:
    """Singles plus one product generator per allowed (non-forbidden) pair."""
    pairs = [(a, b) for a in range(cnf.num_vars) for b in range(a + 1, cnf.num_vars) if not cnf.is_forbidden(a, b)]
    return _abelian(cnf, "sat-abelian-plom-2flip", pairs)


def audit_abelian(cnf: LexCnf, inst: PlomInstance, mapping: SolutionMapping) -> None:
    N = sum(2 ** len(c) for c in cnf.clauses)
    if inst.num_positions != N:
        raise AuditError(f"{inst.num_positions} positions, expected {N}")
    if sum(inst.initial) != len(cnf.clauses):
        raise AuditError("initial string needs exactly one 1 per clause block")
    for c, clause in enumerate(cnf.clauses):
        label = _bits_label(_violating(clause))
        if mapping.target(f"C{c + 1}@{label}") != f"p{c}":
            raise AuditError(f"violating position of clause {c + 1} is not at priority {c}")
    pairs = sum(1 for k in mapping.entries if "+" in k)
    if inst.num_generators != cnf.num_vars + pairs:
        raise AuditError("generator count differs from variables plus allowed pairs")


def extract_abelian(mapping: SolutionMapping, state) -> tuple[int, ...]:
    """Read each block's unique 1; blocks must agree, and agree with the certificate."""
    if not isinstance(state, OrbitState):
        raise ExtractionError("PLOM solution is missing its certificate")
    n, m = int(mapping.meta["n"]), int(mapping.meta["m"])
    cvars, blocks = mapping.cached("blocks", lambda: _abelian_blocks(mapping, m))
    v = state.current
    value: list = [None] * n
    for c in range(m):
        ones = [b for b, p in blocks[c] if p < len(v) and v[p]]
        if len(ones) != 1:
            raise ExtractionError(f"block of clause {c + 1} holds {len(ones)} ones, expected exactly one")
        w = len(cvars[c])
        for i, x in enumerate(cvars[c]):
            bit = (ones[0] >> (w - 1 - i)) & 1
            if value[x] is not None and value[x] != bit:
                raise ExtractionError(f"blocks disagree on variable x{x + 1}")
            value[x] = bit
    cert = _certificate_assignment(mapping, state, n)
    for x in range(n):
        if value[x] is None:
            value[x] = cert[x]
        elif cert[x] != value[x]:
            raise ExtractionError(f"certificate and string disagree on x{x + 1}")
    return tuple(value)


def _abelian_blocks(mapping: SolutionMapping, m: int):
    cvars = [[int(t) - 1 for t in mapping.meta[f"vars.C{c + 1}"].split()] for c in range(m)]
    blocks = []
    for c in range(m):
        w = len(cvars[c])
        blocks.append([(b, mapping.index(f"C{c + 1}@{b:0{w}b}")) for b in range(2 ** w)])
    return cvars, blocks


def _generator_vars(mapping: SolutionMapping, n: int) -> dict[int, tuple[int, ...]]:
    def build():
        out = {}
        for src, tgt in mapping.entries.items():
            if tgt.startswith("g"):
                out[int(tgt[1:]) - 1] = tuple(int(p[1:]) - 1 for p in src.split("+"))
        return out

    return mapping.cached("gens", build)


def _certificate_assignment(mapping: SolutionMapping, state: OrbitState, n: int) -> list[int]:
    gv = _generator_vars(mapping, n)
    counts = [0] * len(gv)
    if state.kind == "parity":
        if len(state.certificate) != len(gv):
            raise ExtractionError("parity certificate length differs from the generator count")
        counts = list(state.certificate)
    elif state.kind == "word":
        for g in state.certificate:
            if not 0 <= g < len(gv):
                raise ExtractionError(f"certificate names unknown generator {g + 1}")
            counts[g] += 1
    else:
        raise ExtractionError(f"abelian instances need a parity or word certificate, got {state.kind}")
    value = [0] * n
    for g, c in enumerate(counts):
        if c % 2:
            for x in gv[g]:
                value[x] ^= 1
    return value


# ---------------------------------------------------------------------------
# cyclic form

def _cyclic_layout(cnf: LexCnf, primes: Sequence[int]):
    """Storage index for ('x', i, t) and ('C', c, t); plus each clause's violating t."""
    cvars = _clause_vars(cnf)
    n = cnf.num_vars
    stor: dict[tuple[str, int, int], int] = {}
    nxt = 0
    for i in range(n):
        for t in range(2, primes[i]):
            stor[("x", i, t)] = nxt
            nxt += 1
    viol = []
    for c, clause in enumerate(cnf.clauses):
        ps = [primes[x] for x in cvars[c]]
        t = crt_decode(_violating(clause), ps)
        viol.append(t)
        stor[("C", c, t)] = nxt
        nxt += 1
    for i in range(n):
        for t in (0, 1):
            if t < primes[i]:
                stor[("x", i, t)] = nxt
                nxt += 1
    lengths = []
    for c in range(len(cnf.clauses)):
        L = 1
        for x in cvars[c]:
            L *= primes[x]
        lengths.append(L)
        for t in range(L):
            if ("C", c, t) not in stor:
                stor[("C", c, t)] = nxt
                nxt += 1
    return cvars, stor, nxt, viol, lengths


def reduce_sat_to_cyclic_plom(cnf: LexCnf) -> tuple[PlomInstance, SolutionMapping]:
    if cnf.d != 1:
        raise ValueError("the cyclic compiler takes a 1-flip formula")
    for idx, c in enumerate(cnf.clauses):
        if len(c) > MAX_CYCLIC_WIDTH:
            raise ValueError(f"clause {idx + 1} has width {len(c)}; the cyclic compiler supports at most {MAX_CYCLIC_WIDTH}")
    n = cnf.num_vars
    primes = first_primes(n)
    cvars, stor, N, viol, lengths = _cyclic_layout(cnf, primes)

    img = [0] * N
    init = [0] * N
    cycles = [("x", i, primes[i]) for i in range(n)] + [("C", c, L) for c, L in enumerate(lengths)]
    for tag, idx, L in cycles:
        init[stor[(tag, idx, 0)]] = 1
        for t in range(L):
            # content at t moves to t+1
            img[stor[(tag, idx, t)]] = stor[(tag, idx, (t - 1) % L)]
    exps, labels = [], []
    for i in range(n):
        for r in range(1, primes[i]):
            res = [0] * n
            res[i] = r
            exps.append(crt_decode(res, primes))
            labels.append(f"x{i + 1}r{r}")
    inst = PlomInstance(N, tuple(init), "cyclic", base=Permutation(tuple(img)), exponents=tuple(exps),
                        priority=tuple(range(N)))

    mapping = SolutionMapping("sat-cyclic-plom")
    mapping.meta["n"] = str(n)
    mapping.meta["m"] = str(len(cnf.clauses))
    mapping.meta["primes"] = " ".join(map(str, primes))
    mapping.meta["bad"] = str(sum(p - 2 for p in primes))
    for c, vs in enumerate(cvars):
        mapping.meta[f"vars.C{c + 1}"] = " ".join(str(v + 1) for v in vs)
        mapping.meta[f"viol.C{c + 1}"] = str(viol[c])
    for k, lab in enumerate(labels):
        mapping.add(lab, f"g{k + 1}")
    for (tag, idx, t), p in sorted(stor.items()):
        mapping.add(f"{tag}{idx + 1}@{t}", f"p{p}")
    audit_cyclic(cnf, inst, mapping)
    return inst, mapping


def audit_cyclic(cnf: LexCnf, inst: PlomInstance, mapping: SolutionMapping) -> None:
    primes = [int(t) for t in mapping.meta["primes"].split()]
    m = len(cnf.clauses)
    lengths = []
    for c in cnf.clauses:
        L = 1
        for lit in c:
            L *= primes[abs(lit) - 1]
        lengths.append(L)
    N = sum(primes) + sum(lengths)
    if inst.num_positions != N:
        raise AuditError(f"{inst.num_positions} positions, expected {N}")
    if inst.num_generators != sum(p - 1 for p in primes):
        raise AuditError("generator count differs from the sum of (p_i - 1)")
    bad = int(mapping.meta["bad"])
    for i, p in enumerate(primes):
        for t in range(2, p):
            if mapping.index(f"x{i + 1}@{t}") >= bad:
                raise AuditError(f"bad-color position x{i + 1}@{t} is not in the top priority band")
    for c in range(m):
        t = mapping.meta[f"viol.C{c + 1}"]
        if mapping.index(f"C{c + 1}@{t}") != bad + c:
            raise AuditError(f"violating position of clause {c + 1} is out of order")
    if sorted(len(cyc) for cyc in inst.cycles) != sorted(primes + lengths):
        raise AuditError("cycle structure of the base permutation is wrong")
    if sum(inst.initial) != len(primes) + m:
        raise AuditError("initial string needs exactly one 1 per cycle")


def extract_cyclic(mapping: SolutionMapping, state) -> tuple[int, ...]:
    """Decode each variable cycle's 1-position; values outside {0, 1} are bad colors."""
    if not isinstance(state, OrbitState):
        raise ExtractionError("PLOM solution is missing its certificate")
    if state.kind != "exponent":
        raise ExtractionError(f"cyclic instances need an exponent certificate, got {state.kind}")
    primes = [int(t) for t in mapping.meta["primes"].split()]
    where = mapping.cached(
        "varpos", lambda: [[mapping.index(f"x{i + 1}@{t}") for t in range(p)] for i, p in enumerate(primes)]
    )
    v = state.current
    out = []
    for i, ps in enumerate(where):
        ones = [t for t, p in enumerate(ps) if p < len(v) and v[p]]
        if len(ones) != 1:
            raise ExtractionError(f"cycle of x{i + 1} holds {len(ones)} ones, expected exactly one")
        t = ones[0]
        if t >= 2:
            raise ExtractionError(f"x{i + 1} has bad color {t}")
        if state.certificate % primes[i] != t:
            raise ExtractionError(f"certificate exponent disagrees with the cycle of x{i + 1}")
        out.append(t)
    return tuple(out)
