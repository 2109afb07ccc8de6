"""FLIP compiled into lexicographic k-SAT/d-FLIP.

All three compilers work on the augmented circuit (payoff output ``v`` and
best-neighbor output ``z``) and duplicate it into a TOP and a BOTTOM copy.
A switch variable ``f`` marks TOP active, a global output register ``o``
holds the harvested payoff, and the best-neighbor output of the active copy
is fed back lazily as the input of the inactive copy.
"""
from __future__ import annotations

from typing import Sequence

from ..circuit import AugmentedCircuit, FlipInstance, build_augmented
from ..lexcnf import LexCnf
from .mapping import AuditError, ExtractionError, SolutionMapping

FLIP_KINDS = ("flip-4sat2flip", "flip-3sat2flip", "flip-4sat1flip")


class _Formula:
    """Named variables plus clauses collected in priority order, split into groups."""

    def __init__(self):
        self.names: list[str] = []
        self.clauses: list[tuple[int, ...]] = []
        self.groups: list[tuple[str, int]] = []

    def var(self, name: str) -> int:
        self.names.append(name)
        return len(self.names)

    def begin(self, group: str) -> None:
        self.groups.append((group, len(self.clauses)))

    def add(self, *lits: int) -> None:
        self.clauses.append(tuple(lits))

    def group_sizes(self) -> dict[str, int]:
        bounds = [start for _, start in self.groups] + [len(self.clauses)]
        return {name: bounds[i + 1] - bounds[i] for i, (name, _) in enumerate(self.groups)}

    def finish(self, kind: str, k: int, d: int, forbidden=frozenset(), **meta) -> tuple[LexCnf, SolutionMapping]:
        cnf = LexCnf(len(self.names), tuple(self.clauses), k, d, frozenset(forbidden))
        mapping = SolutionMapping(kind)
        for key, value in meta.items():
            mapping.meta[key] = str(value)
        mapping.meta["groups"] = ",".join(f"{g}:{c}" for g, c in self.group_sizes().items())
        for idx, name in enumerate(self.names, start=1):
            mapping.add(name, f"v{idx}")
        return cnf, mapping


def nand_rows(g: int, a: int, b: int) -> list[tuple[int, ...]]:
    """Truth-table clauses for ``g <-> NAND(a, b)``, one per input row.

    When both operands are the same variable the two inconsistent rows would
    be tautologies; the two consistent rows are emitted twice instead so every
    gate still yields four clauses.
    """
    if a == b:
        return [(a, g), (a, g), (-a, -g), (-a, -g)]
    return [(a, b, g), (a, -b, g), (-a, b, g), (-a, -b, -g)]


class _TwoCopies:
    """Variables shared by the three FLIP compilers."""

    def __init__(self, F: _Formula, aug: AugmentedCircuit, gate_ports: bool = False):
        c = aug.circuit
        self.aug = aug
        self.n, self.G, self.m = c.num_inputs, c.num_gates, len(aug.payoff_outputs)
        n, G = self.n, self.G
        self.xT = [F.var(f"x{i + 1}.T") for i in range(n)]
        self.xB = [F.var(f"x{i + 1}.B") for i in range(n)]
        self.gT = [F.var(f"g{j + 1}.T") for j in range(G)]
        if gate_ports:
            self.pT = [(F.var(f"g{j + 1}.1.T"), F.var(f"g{j + 1}.2.T")) for j in range(G)]
        self.gB = [F.var(f"g{j + 1}.B") for j in range(G)]
        if gate_ports:
            self.pB = [(F.var(f"g{j + 1}.1.B"), F.var(f"g{j + 1}.2.B")) for j in range(G)]
        self.f = F.var("f")
        self.o = [F.var(f"o{i + 1}") for i in range(self.m)]

    def node(self, side: str, node: int) -> int:
        if node < self.n:
            return (self.xT if side == "T" else self.xB)[node]
        return (self.gT if side == "T" else self.gB)[node - self.n]

    def v(self, side: str, i: int) -> int:
        return (self.gT if side == "T" else self.gB)[self.aug.payoff_outputs[i]]

    def z(self, side: str, j: int) -> int:
        return (self.gT if side == "T" else self.gB)[self.aug.neighbor_outputs[j]]

    def gate_rows(self, side: str, j: int) -> list[tuple[int, ...]]:
        a, b = self.aug.circuit.gates[j]
        g = (self.gT if side == "T" else self.gB)[j]
        return nand_rows(g, self.node(side, a), self.node(side, b))

    def add_gate_group(self, F: _Formula, guarded: bool) -> None:
        f = self.f
        for j in range(self.G):
            for row in self.gate_rows("T", j):
                F.add(*(((-f,) if guarded else ()) + row))
            for row in self.gate_rows("B", j):
                F.add(*(((f,) if guarded else ()) + row))

    def add_control_group(self, F: _Formula) -> None:
        f = self.f
        for i in range(self.m):
            F.add(-f, -self.o[i], self.v("T", i))
            F.add(f, -self.o[i], self.v("B", i))
            F.add(self.o[i])

    def add_feedback_group(self, F: _Formula) -> None:
        f = self.f
        for j in range(self.n):
            zT, zB = self.z("T", j), self.z("B", j)
            F.add(-f, -zT, self.xB[j])
            F.add(-f, zT, -self.xB[j])
            F.add(f, -zB, self.xT[j])
            F.add(f, zB, -self.xT[j])


def reduce_flip_to_4sat2flip(flip: FlipInstance, forbid_input_pairs: bool = False) -> tuple[LexCnf, SolutionMapping]:
    aug = build_augmented(flip)
    F = _Formula()
    t = _TwoCopies(F, aug)
    F.begin("active")
    t.add_gate_group(F, guarded=True)
    F.begin("control")
    t.add_control_group(F)
    F.begin("feedback")
    t.add_feedback_group(F)
    F.begin("correct")
    t.add_gate_group(F, guarded=False)
    forbidden = set()
    if forbid_input_pairs:
        for side in (t.xT, t.xB):
            for a in range(t.n):
                for b in range(a + 1, t.n):
                    forbidden.add((side[a], side[b]))
    cnf, mapping = F.finish(
        "flip-4sat2flip", 4, 2, forbidden, n=t.n, m=t.m, gates=t.G, forbid=int(forbid_input_pairs)
    )
    audit_flip_reduction(cnf, mapping)
    return cnf, mapping


def reduce_flip_to_3sat2flip(flip: FlipInstance) -> tuple[LexCnf, SolutionMapping]:
    aug = build_augmented(flip)
    F = _Formula()
    t = _TwoCopies(F, aug, gate_ports=True)
    f = t.f
    gates = aug.circuit.gates
    F.begin("gates")
    for j in range(t.G):
        for g, (p1, p2) in ((t.gT[j], t.pT[j]), (t.gB[j], t.pB[j])):
            F.add(g, p1)
            F.add(g, p2)
            F.add(-g, -p1, -p2)

    def wires(guarded: bool) -> None:
        for j, ops in enumerate(gates):
            for side, guard, ports in (("T", -f, t.pT[j]), ("B", f, t.pB[j])):
                pre = (guard,) if guarded else ()
                for src, port in zip(ops, ports):
                    y = t.node(side, src)
                    F.add(*pre, -y, port)
                    F.add(*pre, y, -port)

    F.begin("wires-active")
    wires(guarded=True)
    F.begin("control")
    t.add_control_group(F)
    F.begin("feedback")
    t.add_feedback_group(F)
    F.begin("wires")
    wires(guarded=False)
    cnf, mapping = F.finish("flip-3sat2flip", 3, 2, n=t.n, m=t.m, gates=t.G)
    audit_flip_reduction(cnf, mapping)
    return cnf, mapping


def reduce_flip_to_4sat1flip(flip: FlipInstance) -> tuple[LexCnf, SolutionMapping]:
    aug = build_augmented(flip)
    F = _Formula()
    t = _TwoCopies(F, aug)
    f, o, m, n = t.f, t.o, t.m, t.n
    sT = [F.var(f"s{i + 1}.T") for i in range(m)]
    sB = [F.var(f"s{i + 1}.B") for i in range(m)]

    F.begin("active")
    t.add_gate_group(F, guarded=True)

    F.begin("proper")
    for i in range(m):
        for j in range(n):
            zT, zB = t.z("T", j), t.z("B", j)
            F.add(-sB[i], -f, -zT, t.xB[j])
            F.add(-sB[i], -f, zT, -t.xB[j])
            F.add(-sT[i], f, -zB, t.xT[j])
            F.add(-sT[i], f, zB, -t.xT[j])
    for j in range(t.G):
        for i in range(m):
            for row in t.gate_rows("T", j):
                F.add(-sT[i], *row)
            for row in t.gate_rows("B", j):
                F.add(-sB[i], *row)
    for i in range(m):
        for j in range(m):
            F.add(-sB[i], -sT[j])
    for i in range(m):
        F.add(-sB[i], t.v("B", i))
        F.add(-sB[i], -t.v("T", i))
        F.add(-sT[i], t.v("T", i))
        F.add(-sT[i], -t.v("B", i))

    F.begin("outputs")
    for i in range(m):
        F.add(-f, -o[i], t.v("T", i), sB[i])
        F.add(f, -o[i], t.v("B", i), sT[i])
        F.add(o[i])
        F.add(-o[i], -sB[i], -f)
        F.add(-o[i], -sT[i], f)

    F.begin("feedback")
    t.add_feedback_group(F)
    F.begin("correct")
    t.add_gate_group(F, guarded=False)

    F.begin("incentive")
    for i in range(m):
        F.add(-f, -t.v("B", i), t.v("T", i), sB[i])
        F.add(f, -t.v("T", i), t.v("B", i), sT[i])
    F.begin("shadow-off")
    for i in range(m):
        F.add(-sB[i])
        F.add(-sT[i])

    cnf, mapping = F.finish("flip-4sat1flip", 4, 1, n=n, m=m, gates=t.G)
    audit_flip_reduction(cnf, mapping)
    return cnf, mapping


# ---------------------------------------------------------------------------
# audits

def _expected_groups(kind: str, n: int, m: int, G: int) -> dict[str, int]:
    if kind == "flip-4sat2flip":
        return {"active": 8 * G, "control": 3 * m, "feedback": 4 * n, "correct": 8 * G}
    if kind == "flip-3sat2flip":
        return {"gates": 6 * G, "wires-active": 8 * G, "control": 3 * m, "feedback": 4 * n, "wires": 8 * G}
    if kind == "flip-4sat1flip":
        return {
            "active": 8 * G,
            "proper": 4 * m * n + 8 * G * m + m * m + 4 * m,
            "outputs": 5 * m,
            "feedback": 4 * n,
            "correct": 8 * G,
            "incentive": 2 * m,
            "shadow-off": 2 * m,
        }
    raise ValueError(kind)


def expected_num_vars(kind: str, n: int, m: int, G: int) -> int:
    return {
        "flip-4sat2flip": 2 * n + 2 * G + 1 + m,
        "flip-3sat2flip": 2 * n + 6 * G + 1 + m,
        "flip-4sat1flip": 2 * n + 2 * G + 1 + m + 2 * m,
    }[kind]


def group_slices(mapping: SolutionMapping) -> dict[str, range]:
    out, start = {}, 0
    for item in mapping.meta["groups"].split(","):
        name, count = item.rsplit(":", 1)
        out[name] = range(start, start + int(count))
        start += int(count)
    return out


def audit_flip_reduction(cnf: LexCnf, mapping: SolutionMapping) -> None:
    """Recompute counts from closed forms and check widths and guard literals."""
    kind = mapping.kind
    n, m, G = (int(mapping.meta[k]) for k in ("n", "m", "gates"))
    expected = _expected_groups(kind, n, m, G)
    slices = group_slices(mapping)
    got = {name: len(r) for name, r in slices.items()}
    if got != expected:
        raise AuditError(f"{kind}: group sizes {got} != closed form {expected}")
    if cnf.num_vars != expected_num_vars(kind, n, m, G):
        raise AuditError(f"{kind}: {cnf.num_vars} variables, expected {expected_num_vars(kind, n, m, G)}")
    width = {"flip-3sat2flip": 3}.get(kind, 4)
    if max(len(c) for c in cnf.clauses) > width:
        raise AuditError(f"{kind}: clause wider than {width}")
    f = mapping.var("f") + 1
    guarded = {
        "flip-4sat2flip": ("active", "feedback"),
        "flip-3sat2flip": ("wires-active", "feedback"),
        "flip-4sat1flip": ("active", "feedback"),
    }[kind]
    for name in guarded:
        for idx in slices[name]:
            if f not in cnf.clauses[idx] and -f in cnf.clauses[idx]:
                continue
            if f in cnf.clauses[idx] and -f not in cnf.clauses[idx]:
                continue
            raise AuditError(f"{kind}: clause {idx + 1} in group {name} lacks an f guard")
    for name in ("correct", "wires", "gates"):
        for idx in slices.get(name, ()):
            if f in cnf.clauses[idx] or -f in cnf.clauses[idx]:
                raise AuditError(f"{kind}: unconditional clause {idx + 1} mentions f")
    if kind == "flip-4sat2flip" and mapping.meta.get("forbid") == "1":
        if len(cnf.forbidden) != n * (n - 1):
            raise AuditError(f"{kind}: expected {n * (n - 1)} forbidden pairs, got {len(cnf.forbidden)}")


# ---------------------------------------------------------------------------
# extraction

def _input_vars(mapping: SolutionMapping):
    def build():
        n = int(mapping.meta["n"])
        xT = [mapping.var(f"x{i + 1}.T") for i in range(n)]
        xB = [mapping.var(f"x{i + 1}.B") for i in range(n)]
        return xT, xB, mapping.var("f")

    return mapping.cached("inputs", build)


def extract_flip(mapping: SolutionMapping, bits: Sequence[int]) -> tuple[int, ...]:
    """Input of the active copy: ``x^T`` when ``f = 1``, else ``x^B``."""
    xT, xB, f = _input_vars(mapping)
    need = max(xT + xB + [f]) + 1
    if len(bits) < need:
        raise ExtractionError(f"assignment has {len(bits)} bits, mapping needs at least {need}")
    src = xT if bits[f] else xB
    return tuple(bits[v] for v in src)
