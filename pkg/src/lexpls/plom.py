"""Permutation orbit local minimization (PLOM).

Conventions: ``apply(s, pi)[p] = s[pi[p]]`` and ``compose(pi, tau)`` means
"apply ``pi`` then ``tau``", so ``apply(apply(s, pi), tau) == apply(s,
compose(pi, tau))``.  Position 0 is the most significant for the
lexicographic order; reductions store positions in priority order and record
the semantic-to-storage map in ``PlomInstance.priority``.

A string alone is not a PLOM solution: states carry a certificate naming the
group element (a generator word, a parity vector for commuting involutions,
or an exponent of the base permutation for cyclic instances).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from math import gcd, lcm, prod
from typing import Iterable, Optional, Sequence, Union

Bits = tuple[int, ...]
FLAVORS = ("general", "abelian-involution", "cyclic")


class PlomError(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    image: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(len(self.image))):
            raise PlomError("image is not a bijection on 0..N-1")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def __len__(self) -> int:
        return len(self.image)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for p, q in enumerate(self.image):
            inv[q] = p
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(p == q for p, q in enumerate(self.image))

    def is_involution(self) -> bool:
        im = self.image
        return all(im[im[p]] == p for p in range(len(im)))

    def cycles(self) -> list[list[int]]:
        """Cycles in content-movement order: the symbol at ``c[k]`` moves to ``c[k+1]``.

        Each cycle starts at its smallest position; cycles sorted by that.
        """
        inv = self.inverse().image
        seen = [False] * len(inv)
        out = []
        for start in range(len(inv)):
            if seen[start]:
                continue
            cyc = []
            p = start
            while not seen[p]:
                seen[p] = True
                cyc.append(p)
                p = inv[p]
            out.append(cyc)
        return out


def apply(s: Sequence[int], pi: Union[Permutation, Sequence[int]]) -> Bits:
    im = pi.image if isinstance(pi, Permutation) else pi
    if len(im) != len(s):
        raise PlomError(f"string of length {len(s)} vs permutation on {len(im)} points")
    return tuple(s[q] for q in im)


def compose(pi: Permutation, tau: Permutation) -> Permutation:
    """``pi`` then ``tau``."""
    if len(pi) != len(tau):
        raise PlomError("permutations of different sizes")
    a = pi.image
    return Permutation(tuple(a[q] for q in tau.image))


def power(pi: Permutation, e: int) -> Permutation:
    """``pi`` applied ``e`` times (``e`` may be negative)."""
    img = [0] * len(pi)
    for cyc in pi.cycles():
        L = len(cyc)
        # apply(s, pi^e)[c_k] = s[c_{k-e}]
        for k, p in enumerate(cyc):
            img[p] = cyc[(k - e) % L]
    return Permutation(tuple(img))


def commute(pi: Permutation, tau: Permutation) -> bool:
    a, b = pi.image, tau.image
    return all(a[b[p]] == b[a[p]] for p in range(len(a)))


@dataclass(frozen=True)
class PlomInstance:
    num_positions: int
    initial: Bits
    flavor: str
    gens: tuple[Permutation, ...] = ()
    base: Optional[Permutation] = None
    exponents: tuple[int, ...] = ()
    priority: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        N = self.num_positions
        if self.flavor not in FLAVORS:
            raise PlomError(f"unknown flavor {self.flavor!r}")
        if len(self.initial) != N or any(b not in (0, 1) for b in self.initial):
            raise PlomError("initial string must be a 0/1 string of length N")
        if self.priority is not None and sorted(self.priority) != list(range(N)):
            raise PlomError("priority must be a permutation of the positions")
        if self.flavor == "cyclic":
            if self.base is None or len(self.base) != N:
                raise PlomError("cyclic instance needs a base permutation on N points")
            if self.gens:
                raise PlomError("cyclic instances store exponents, not generators")
            return
        if self.base is not None or self.exponents:
            raise PlomError("only cyclic instances carry a base permutation")
        for g in self.gens:
            if len(g) != N:
                raise PlomError("generator size differs from N")
        if self.flavor == "abelian-involution":
            for i, g in enumerate(self.gens):
                if not g.is_involution():
                    raise PlomError(f"generator {i + 1} is not an involution")
            for i in range(len(self.gens)):
                for j in range(i + 1, len(self.gens)):
                    if not commute(self.gens[i], self.gens[j]):
                        raise PlomError(f"generators {i + 1} and {j + 1} do not commute")

    @property
    def num_generators(self) -> int:
        return len(self.exponents) if self.flavor == "cyclic" else len(self.gens)

    @cached_property
    def cycles(self) -> list[list[int]]:
        if self.base is None:
            raise PlomError("not a cyclic instance")
        return self.base.cycles()

    @cached_property
    def group_order(self) -> int:
        """Order of the base permutation (lcm of its cycle lengths)."""
        return reduce(lcm, (len(c) for c in self.cycles), 1)

    @cached_property
    def generators(self) -> tuple[Permutation, ...]:
        if self.flavor == "cyclic":
            return tuple(power(self.base, e) for e in self.exponents)
        return self.gens


@dataclass(frozen=True)
class OrbitState:
    """``current = initial ∘ (element named by certificate)``.

    ``kind`` is ``word`` (tuple of 0-based generator indices, applied left to
    right), ``parity`` (0/1 per generator) or ``exponent`` (power of the base
    permutation, reduced mod the group order).
    """

    current: Bits
    kind: str
    certificate: Union[tuple[int, ...], int]


_CERT_KIND = {"general": "word", "abelian-involution": "parity", "cyclic": "exponent"}


def initial_state(inst: PlomInstance) -> OrbitState:
    kind = _CERT_KIND[inst.flavor]
    cert: Union[tuple, int] = {"word": (), "parity": (0,) * inst.num_generators, "exponent": 0}[kind]
    return OrbitState(inst.initial, kind, cert)


def rotate_cycles(v: Sequence[int], cycles: Iterable[Sequence[int]], e: int) -> Bits:
    out = list(v)
    for cyc in cycles:
        L = len(cyc)
        r = e % L
        if r == 0:
            continue
        for k, p in enumerate(cyc):
            out[p] = v[cyc[(k - r) % L]]
    return tuple(out)


def cycle_rotations(inst: PlomInstance, e: int) -> tuple[int, ...]:
    return tuple(e % len(c) for c in inst.cycles)


def apply_power(inst: PlomInstance, state: OrbitState, e: int) -> OrbitState:
    """Rotate every cycle of the base permutation by ``e``."""
    if inst.flavor != "cyclic":
        raise PlomError("apply_power needs a cyclic instance")
    v = rotate_cycles(state.current, inst.cycles, e)
    return OrbitState(v, "exponent", (state.certificate + e) % inst.group_order)


def step(inst: PlomInstance, state: OrbitState, g: int) -> OrbitState:
    """Apply generator ``g`` (0-based) and update the certificate."""
    if inst.flavor == "cyclic":
        return apply_power(inst, state, inst.exponents[g])
    v = apply(state.current, inst.gens[g])
    if state.kind == "parity":
        par = list(state.certificate)
        par[g] ^= 1
        return OrbitState(v, "parity", tuple(par))
    return OrbitState(v, "word", state.certificate + (g,))


def state_from_certificate(inst: PlomInstance, kind: str, cert) -> OrbitState:
    v = inst.initial
    if kind == "exponent":
        if inst.flavor != "cyclic":
            raise PlomError("exponent certificates need a cyclic instance")
        return OrbitState(rotate_cycles(v, inst.cycles, cert), kind, cert % inst.group_order)
    if kind == "parity":
        if len(cert) != inst.num_generators:
            raise PlomError("parity vector length differs from the generator count")
        for g, bit in enumerate(cert):
            if bit:
                v = apply(v, inst.generators[g])
        return OrbitState(v, kind, tuple(cert))
    if kind == "word":
        for g in cert:
            v = apply(v, inst.generators[g])
        return OrbitState(v, kind, tuple(cert))
    raise PlomError(f"unknown certificate kind {kind!r}")


def verify_certificate(inst: PlomInstance, state: OrbitState) -> bool:
    """Recompute the string from the certificate and compare."""
    try:
        return state_from_certificate(inst, state.kind, state.certificate).current == tuple(state.current)
    except (PlomError, IndexError):
        return False


def abelian_certificate_check(inst: PlomInstance, state: OrbitState) -> bool:
    if inst.flavor != "abelian-involution":
        raise PlomError("needs an abelian-involution instance")
    if state.kind != "parity":
        return False
    return verify_certificate(inst, state)


def is_plom_local_min(inst: PlomInstance, state: OrbitState) -> bool:
    """No generator maps the current string to a lexicographically smaller one."""
    if not isinstance(state, OrbitState):
        raise TypeError("PLOM solutions must be OrbitState values with a certificate")
    v = tuple(state.current)
    if inst.flavor == "cyclic":
        return all(rotate_cycles(v, inst.cycles, e) >= v for e in inst.exponents)
    return all(apply(v, g) >= v for g in inst.gens)


class PlomSearch:
    """Standard algorithm on a PLOM instance; states are OrbitState values."""

    def __init__(self, inst: PlomInstance, start: Optional[OrbitState] = None, pivot: str = "first"):
        self.inst = inst
        self.pivot = pivot
        self._start = start if start is not None else initial_state(inst)

    def start(self):
        return self._start

    def improving(self, state: OrbitState):
        best = None
        for g in range(self.inst.num_generators):
            nxt = step(self.inst, state, g)
            if nxt.current < state.current:
                if self.pivot == "first":
                    return nxt
                if best is None or nxt.current < best.current:
                    best = nxt
        return best

    def better(self, new: OrbitState, old: OrbitState) -> bool:
        return tuple(new.current) < tuple(old.current)

    def describe(self, state: OrbitState) -> str:
        cert = state.certificate
        tail = str(cert) if isinstance(cert, int) else " ".join(map(str, cert))
        return "".join(map(str, state.current)) + f" {state.kind} {tail}".rstrip()


# ---------------------------------------------------------------------------
# Chinese remainder arithmetic

def crt_encode(l: int, moduli: Sequence[int]) -> tuple[int, ...]:
    N = prod(moduli)
    if not 0 <= l < N:
        raise ValueError(f"{l} is outside Z_{N}")
    return tuple(l % p for p in moduli)


def crt_decode(residues: Sequence[int], moduli: Sequence[int]) -> int:
    """Unique ``l`` in ``Z_N`` with ``l = r_i mod p_i``; moduli pairwise coprime."""
    if len(residues) != len(moduli):
        raise ValueError("residue and modulus lists differ in length")
    for i, p in enumerate(moduli):
        if p < 1:
            raise ValueError(f"modulus {p} must be positive")
        for q in moduli[i + 1:]:
            if gcd(p, q) != 1:
                raise ValueError(f"moduli {p} and {q} are not coprime")
    N = prod(moduli)
    l = 0
    for r, p in zip(residues, moduli):
        if not 0 <= r < p:
            raise ValueError(f"residue {r} is outside Z_{p}")
        Mi = N // p
        l += r * Mi * pow(Mi, -1, p) if p > 1 else 0
    return l % N


def first_primes(n: int) -> list[int]:
    out: list[int] = []
    cand = 2
    while len(out) < n:
        if all(cand % p for p in out if p * p <= cand):
            out.append(cand)
        cand += 1
    return out


# ---------------------------------------------------------------------------
# text format

def format_plom(inst: PlomInstance) -> str:
    lines = [f"p plom {inst.num_positions} {inst.num_generators} {inst.flavor}"]
    lines.append("init " + "".join(map(str, inst.initial)))
    prio = inst.priority if inst.priority is not None else tuple(range(inst.num_positions))
    lines.append("prio " + " ".join(map(str, prio)))
    if inst.flavor == "cyclic":
        lines.append("base " + " ".join(map(str, inst.base.image)))
        lines.append("exp " + " ".join(map(str, inst.exponents)))
    else:
        for g in inst.gens:
            lines.append("gen " + " ".join(map(str, g.image)))
    return "\n".join(lines) + "\n"


def parse_plom(text: str) -> PlomInstance:
    header = init = prio = base = None
    gens, exps = [], []
    for raw in text.splitlines():
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        tag, rest = toks[0], toks[1:]
        if tag == "p":
            if len(rest) != 4 or rest[0] != "plom":
                raise PlomError("header must be 'p plom <N> <num_generators> <flavor>'")
            header = (int(rest[1]), int(rest[2]), rest[3])
        elif tag == "init":
            init = tuple(int(ch) for ch in (rest[0] if rest else ""))
        elif tag == "prio":
            prio = tuple(int(t) for t in rest)
        elif tag == "gen":
            gens.append(Permutation(tuple(int(t) for t in rest)))
        elif tag == "base":
            base = Permutation(tuple(int(t) for t in rest))
        elif tag == "exp":
            exps.extend(int(t) for t in rest)
        else:
            raise PlomError(f"unknown line {raw!r}")
    if header is None or init is None:
        raise PlomError("missing header or init line")
    N, ngen, flavor = header
    inst = PlomInstance(N, init, flavor, tuple(gens), base, tuple(exps), prio)
    if inst.num_generators != ngen:
        raise PlomError(f"header announces {ngen} generators, found {inst.num_generators}")
    return inst


def format_state(state: OrbitState) -> str:
    cert = state.certificate
    tail = str(cert) if isinstance(cert, int) else " ".join(map(str, cert))
    return f"orbit {''.join(map(str, state.current))} {state.kind} {tail}".rstrip() + "\n"


def parse_state(text: str) -> OrbitState:
    toks = text.split()
    if len(toks) < 3 or toks[0] != "orbit":
        raise PlomError("orbit state line must be 'orbit <bits> <kind> <certificate...>'")
    v = tuple(int(ch) for ch in toks[1])
    kind = toks[2]
    if kind == "exponent":
        return OrbitState(v, kind, int(toks[3]))
    return OrbitState(v, kind, tuple(int(t) for t in toks[3:]))
