"""NAND circuits, the FLIP local-search problem, and the augmented circuit.

Circuit nodes are numbered ``0 .. n-1`` for the inputs followed by
``n .. n+G-1`` for the gates, so gate ``j`` (0-based) is node ``n + j``.
Every gate is a binary NAND whose operands are strictly earlier nodes, which
makes the gate list a topological order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Bits = tuple[int, ...]


class CircuitError(ValueError):
    """Malformed circuit or netlist."""


class ShapeError(ValueError):
    """Input bit-string does not match the circuit."""


@dataclass(frozen=True)
class Circuit:
    num_inputs: int
    gates: tuple[tuple[int, int], ...]
    outputs: tuple[int, ...]

    def __post_init__(self):
        n = self.num_inputs
        if n < 1:
            raise CircuitError("circuit needs at least one input")
        if not self.gates:
            raise CircuitError("circuit needs at least one gate")
        if not self.outputs:
            raise CircuitError("circuit needs at least one output")
        for j, (a, b) in enumerate(self.gates):
            for r in (a, b):
                if not 0 <= r < n + j:
                    raise CircuitError(f"gate {j + 1} refers to node {r}, not strictly earlier")
        for o in self.outputs:
            if not 0 <= o < len(self.gates):
                raise CircuitError(f"output refers to missing gate {o + 1}")

    @property
    def num_gates(self) -> int:
        return len(self.gates)

    @property
    def num_outputs(self) -> int:
        return len(self.outputs)

    def gate_node(self, j: int) -> int:
        return self.num_inputs + j


def evaluate_nodes(circuit: Circuit, bits: Sequence[int]) -> list[int]:
    """Value of every node (inputs first, then gates)."""
    if len(bits) != circuit.num_inputs:
        raise ShapeError(f"expected {circuit.num_inputs} input bits, got {len(bits)}")
    vals = [1 if b else 0 for b in bits]
    append = vals.append
    for a, b in circuit.gates:
        append(0 if vals[a] & vals[b] else 1)
    return vals


def evaluate(circuit: Circuit, bits: Sequence[int]) -> Bits:
    vals = evaluate_nodes(circuit, bits)
    n = circuit.num_inputs
    return tuple(vals[n + o] for o in circuit.outputs)


@dataclass(frozen=True)
class FlipInstance:
    """Maximize the circuit output, read as a binary number, over 1-bit input flips."""

    circuit: Circuit

    @property
    def n(self) -> int:
        return self.circuit.num_inputs

    @property
    def m(self) -> int:
        return self.circuit.num_outputs


def bits_to_int(bits: Sequence[int]) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | (1 if b else 0)
    return value


def int_to_bits(value: int, width: int) -> Bits:
    return tuple((value >> (width - 1 - i)) & 1 for i in range(width))


def flip_bit(bits: Sequence[int], i: int) -> Bits:
    out = list(bits)
    out[i] ^= 1
    return tuple(out)


def payoff(flip: FlipInstance, x: Sequence[int]) -> int:
    """Binary value of the outputs, output 1 most significant."""
    return bits_to_int(evaluate(flip.circuit, x))


def best_neighbor(flip: FlipInstance, x: Sequence[int]) -> tuple[int, Bits]:
    """Best Hamming-1 neighbor as ``(i, x ^ e_i)`` with 1-based ``i``.

    Ties go to the smallest index.
    """
    if len(x) != flip.n:
        raise ShapeError(f"expected {flip.n} input bits, got {len(x)}")
    best_i, best_y, best_val = 0, (), -1
    for i in range(flip.n):
        y = flip_bit(x, i)
        val = payoff(flip, y)
        if val > best_val:
            best_i, best_y, best_val = i + 1, y, val
    return best_i, best_y


def is_flip_local_opt(flip: FlipInstance, x: Sequence[int]) -> bool:
    here = payoff(flip, x)
    return all(payoff(flip, flip_bit(x, i)) <= here for i in range(flip.n))


# ---------------------------------------------------------------------------
# augmented circuit

@dataclass(frozen=True)
class AugmentedCircuit:
    circuit: Circuit
    payoff_outputs: tuple[int, ...]
    neighbor_outputs: tuple[int, ...]
    source: FlipInstance


class _Builder:
    """Appends NAND gates and hands back node ids."""

    def __init__(self, num_inputs: int):
        self.num_inputs = num_inputs
        self.gates: list[tuple[int, int]] = []

    def nand(self, a: int, b: int) -> int:
        self.gates.append((a, b))
        return self.num_inputs + len(self.gates) - 1

    def inv(self, a: int) -> int:
        return self.nand(a, a)

    def and_(self, a: int, b: int) -> int:
        return self.inv(self.nand(a, b))

    def xor(self, a: int, b: int) -> int:
        t = self.nand(a, b)
        return self.nand(self.nand(a, t), self.nand(b, t))

    def mux(self, sel: int, not_sel: int, if_one: int, if_zero: int) -> int:
        return self.nand(self.nand(sel, if_one), self.nand(not_sel, if_zero))

    def copy_of(self, circuit: Circuit, input_nodes: Sequence[int]) -> list[int]:
        """Instantiate ``circuit`` on the given input nodes; returns its output nodes."""
        node = list(input_nodes)
        for a, b in circuit.gates:
            node.append(self.nand(node[a], node[b]))
        n = circuit.num_inputs
        return [node[n + o] for o in circuit.outputs]

    def greater(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Node that is 1 iff ``a > b`` as unsigned numbers, MSB first.

        Built LSB-up as ``gt_k = MAJ(a_k, not b_k, gt_{k+1})`` with
        ``gt_{m+1} = 0``.  Costs 3 gates for the last bit and 5 for the others.
        """
        m = len(a)
        u = self.nand(a[m - 1], b[m - 1])
        gt = self.inv(self.nand(a[m - 1], u))
        for k in range(m - 2, -1, -1):
            u = self.nand(a[k], b[k])
            t1 = self.nand(a[k], u)          # not (a and not b)
            t2 = self.nand(b[k], u)          # a or not b
            gt = self.nand(t1, self.nand(gt, t2))
        return gt


# Extra gates per (input, output) pair beyond the n+1 copies of C'.
AUGMENT_GATE_CONSTANT = 17


def build_augmented(flip: FlipInstance) -> AugmentedCircuit:
    """Circuit with outputs ``v = C'(x)`` followed by ``z = best neighbor of x``.

    Copy 0 of C' reads ``x``; copy ``i`` reads ``x`` with bit ``i`` inverted.
    A comparator cascade keeps the running maximum (strict ``>`` so earlier
    candidates win ties) and a one-hot winner vector ``w`` is XORed onto ``x``
    to form ``z``.
    """
    src = flip.circuit
    n = src.num_inputs
    bld = _Builder(n)
    x = list(range(n))
    v = bld.copy_of(src, x)

    inverted = [bld.inv(x[i]) for i in range(n)]
    cand = []
    for i in range(n):
        xi = list(x)
        xi[i] = inverted[i]
        cand.append(bld.copy_of(src, xi))

    if n == 1:
        z = [inverted[0]]
    else:
        best = cand[0]
        gts, not_gts = [], []
        for i in range(1, n):
            gt = bld.greater(cand[i], best)
            ngt = bld.inv(gt)
            gts.append(gt)
            not_gts.append(ngt)
            if i < n - 1:
                best = [bld.mux(gt, ngt, c, b) for c, b in zip(cand[i], best)]
        # winner i (0-based, i >= 1) iff gt_i and no later gt fired
        win = [0] * n
        suffix = not_gts[-1]
        win[n - 1] = gts[-1]
        for i in range(n - 2, 0, -1):
            win[i] = bld.and_(gts[i - 1], suffix)
            suffix = bld.and_(suffix, not_gts[i - 1])
        win[0] = suffix
        z = [bld.xor(x[j], win[j]) for j in range(n)]

    gate_of = lambda node: node - n  # noqa: E731
    payoff_outputs = tuple(gate_of(o) for o in v)
    neighbor_outputs = tuple(gate_of(o) for o in z)
    circuit = Circuit(n, tuple(bld.gates), payoff_outputs + neighbor_outputs)
    return AugmentedCircuit(circuit, payoff_outputs, neighbor_outputs, flip)


def evaluate_augmented(aug: AugmentedCircuit, x: Sequence[int]) -> tuple[Bits, Bits]:
    vals = evaluate_nodes(aug.circuit, x)
    n = aug.circuit.num_inputs
    v = tuple(vals[n + o] for o in aug.payoff_outputs)
    z = tuple(vals[n + o] for o in aug.neighbor_outputs)
    return v, z


# ---------------------------------------------------------------------------
# netlist text format

def _ref_name(circuit_inputs: int, node: int) -> str:
    if node < circuit_inputs:
        return f"x{node + 1}"
    return f"g{node - circuit_inputs + 1}"


def format_netlist(circuit: Circuit) -> str:
    n = circuit.num_inputs
    lines = [f"circuit {n} {circuit.num_gates}"]
    for a, b in circuit.gates:
        lines.append(f"nand {_ref_name(n, a)} {_ref_name(n, b)}")
    lines.append("outputs " + " ".join(f"g{o + 1}" for o in circuit.outputs))
    return "\n".join(lines) + "\n"


def _parse_ref(tok: str, n: int, gate_index: int) -> int:
    if len(tok) < 2 or tok[0] not in "xg" or not tok[1:].isdigit():
        raise CircuitError(f"bad reference {tok!r}")
    k = int(tok[1:])
    if tok[0] == "x":
        if not 1 <= k <= n:
            raise CircuitError(f"input {tok} out of range")
        return k - 1
    if not 1 <= k <= gate_index:
        raise CircuitError(f"gate reference {tok} must point to an earlier gate")
    return n + k - 1


def parse_netlist(text: str) -> Circuit:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or lines[0][0] != "circuit" or len(lines[0]) != 3:
        raise CircuitError("missing 'circuit <n> <num_gates>' header")
    n, g = int(lines[0][1]), int(lines[0][2])
    if n < 1 or g < 1:
        raise CircuitError("circuit needs n >= 1 inputs and at least one gate")
    body = lines[1:]
    if len(body) != g + 1:
        raise CircuitError(f"expected {g} gate lines and an outputs line")
    gates = []
    for j, toks in enumerate(body[:g]):
        if toks[0] != "nand" or len(toks) != 3:
            raise CircuitError(f"bad gate line {' '.join(toks)!r}")
        gates.append((_parse_ref(toks[1], n, j), _parse_ref(toks[2], n, j)))
    footer = body[g]
    if footer[0] != "outputs" or len(footer) < 2:
        raise CircuitError("missing 'outputs' line")
    outs = []
    for tok in footer[1:]:
        if not tok.startswith("g"):
            raise CircuitError(f"output {tok} must be a gate")
        outs.append(_parse_ref(tok, n, g) - n)
    return Circuit(n, tuple(gates), tuple(outs))
