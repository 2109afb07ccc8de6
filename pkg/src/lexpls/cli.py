"""Command-line front end: ``lexpls {gen,reduce,solve,verify,extract,audit}``.

Exit codes: 0 success, 1 semantic failure (counterexample, no termination,
failed audit), 2 usage or parse error, or a space too large to enumerate.
"""
from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .circuit import CircuitError, FlipInstance, ShapeError, format_netlist, parse_netlist
from .congestion import GameError, format_game, parse_game, parse_profile
from .generate import random_circuit, random_lexcnf
from .lexcnf import CnfError, format_lexcnf, parse_lexcnf
from .oracle import (
    CnfProblem,
    FlipProblem,
    GameProblem,
    PlomProblem,
    SpaceTooLarge,
    enumerate_local_optima,
    run_restarts,
    validate_reduction,
)
from .plom import PlomError, format_plom, initial_state, parse_plom, parse_state
from .reductions import (
    AuditError,
    ExtractionError,
    SolutionMapping,
    extract_solution,
    format_mapping,
    parse_mapping,
    reduce_circuit_eval_to_2sat,
    reduce_flip_to_3sat2flip,
    reduce_flip_to_4sat1flip,
    reduce_flip_to_4sat2flip,
    reduce_sat_to_abelian_plom,
    reduce_sat_to_abelian_plom_2flip,
    reduce_sat_to_congestion,
    reduce_sat_to_cyclic_plom,
)
from .search import DEFAULT_MAX_STEPS, bitstring, run_standard

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# CLI tag -> (mapping kind, source format)
REDUCTIONS = {
    "4sat2flip": ("flip-4sat2flip", "circuit"),
    "3sat2flip": ("flip-3sat2flip", "circuit"),
    "4sat1flip": ("flip-4sat1flip", "circuit"),
    "abelian-plom": ("sat-abelian-plom", "lexcnf"),
    "abelian-plom-2flip": ("sat-abelian-plom-2flip", "lexcnf"),
    "cyclic-plom": ("sat-cyclic-plom", "lexcnf"),
    "congestion": ("sat-congestion-{delay}", "lexcnf"),
    "circuit-2sat": ("circuit-2sat", "circuit"),
}
PARSE_ERRORS = (CircuitError, ShapeError, CnfError, PlomError, GameError, ValueError, KeyError, IndexError)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# file helpers

def detect_format(text: str) -> str:
    for line in text.splitlines():
        toks = line.split()
        if not toks or toks[0] in ("c", "#"):
            continue
        if toks[0] == "circuit":
            return "circuit"
        if toks[0] == "p" and len(toks) > 1 and toks[1] in ("lexcnf", "plom", "cgame"):
            return toks[1]
        break
    raise UsageError("unrecognized instance format")


def load_instance(path: str):
    text = _read(path)
    kind = detect_format(text)
    parser = {"circuit": parse_netlist, "lexcnf": parse_lexcnf, "plom": parse_plom, "cgame": parse_game}[kind]
    return kind, parser(text)


def format_instance(obj) -> str:
    from .circuit import Circuit
    from .congestion import CongestionGame
    from .lexcnf import LexCnf
    from .plom import PlomInstance

    if isinstance(obj, Circuit):
        return format_netlist(obj)
    if isinstance(obj, LexCnf):
        return format_lexcnf(obj)
    if isinstance(obj, PlomInstance):
        return format_plom(obj)
    if isinstance(obj, CongestionGame):
        return format_game(obj)
    raise TypeError(type(obj))


def parse_solution(text: str):
    toks = text.split()
    if not toks:
        raise UsageError("empty solution file")
    if toks[0] == "assign":
        return tuple(int(ch) for ch in (toks[1] if len(toks) > 1 else ""))
    if toks[0] == "orbit":
        return parse_state(text.strip().splitlines()[0])
    if toks[0] == "profile":
        return parse_profile(text.strip().splitlines()[0])
    raise UsageError(f"unknown solution record {toks[0]!r}")


def problem_for(kind: str, inst):
    if kind == "circuit":
        return FlipProblem(FlipInstance(inst))
    if kind == "lexcnf":
        return CnfProblem(inst)
    if kind == "plom":
        return PlomProblem(inst)
    return GameProblem(inst)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


def _bits(text: str) -> tuple[int, ...]:
    if any(ch not in "01" for ch in text):
        raise UsageError(f"{text!r} is not a bit string")
    return tuple(int(ch) for ch in text)


# ---------------------------------------------------------------------------
# reductions

def run_reduction(tag: str, source, *, forbid_input_pairs=False, alpha="2", delay="step", input_bits=""):
    if tag in ("4sat2flip", "3sat2flip", "4sat1flip"):
        flip = FlipInstance(source)
        if tag == "4sat2flip":
            return reduce_flip_to_4sat2flip(flip, forbid_input_pairs)
        return (reduce_flip_to_3sat2flip if tag == "3sat2flip" else reduce_flip_to_4sat1flip)(flip)
    if tag == "abelian-plom":
        return reduce_sat_to_abelian_plom(source)
    if tag == "abelian-plom-2flip":
        return reduce_sat_to_abelian_plom_2flip(source)
    if tag == "cyclic-plom":
        return reduce_sat_to_cyclic_plom(source)
    if tag == "congestion":
        return reduce_sat_to_congestion(source, Fraction(alpha), delay)
    if tag == "circuit-2sat":
        return reduce_circuit_eval_to_2sat(source, _bits(input_bits))
    raise UsageError(f"unknown reduction {tag!r}")


def tag_for_kind(kind: str) -> str:
    for tag, (k, _) in REDUCTIONS.items():
        if k == kind or (tag == "congestion" and kind.startswith("sat-congestion-")):
            return tag
    raise UsageError(f"unknown mapping kind {kind!r}")


def options_from_mapping(mapping: SolutionMapping) -> dict:
    opts = {}
    if mapping.kind == "flip-4sat2flip":
        opts["forbid_input_pairs"] = mapping.meta.get("forbid") == "1"
    if mapping.kind.startswith("sat-congestion-"):
        opts["alpha"] = mapping.meta["alpha"]
        opts["delay"] = mapping.kind.rsplit("-", 1)[1]
    if mapping.kind == "circuit-2sat":
        opts["input_bits"] = mapping.meta["input"]
    return opts


# ---------------------------------------------------------------------------
# subcommands

def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    if args.kind == "circuit":
        if args.n < 1 or args.gates < 1 or args.outputs < 1:
            raise UsageError("gen circuit needs --n, --gates and --outputs all >= 1")
        obj = random_circuit(rng, args.n, args.gates, args.outputs)
    else:
        if args.n < 1 or args.m < 0 or args.k < 1 or args.d not in (1, 2):
            raise UsageError("gen lexcnf needs --n >= 1, --m >= 0, --k >= 1, --d in {1,2}")
        obj = random_lexcnf(rng, args.n, args.m, args.k, args.d, args.min_width, args.cover_all, args.forbid)
    _write(args.output, format_instance(obj))
    return EXIT_OK


def cmd_reduce(args) -> int:
    kind, src = load_instance(args.source)
    want = REDUCTIONS[args.to][1]
    if kind != want:
        raise UsageError(f"reduction {args.to} takes a {want} file, got {kind}")
    target, mapping = run_reduction(
        args.to, src, forbid_input_pairs=args.forbid_input_pairs, alpha=args.alpha, delay=args.delay,
        input_bits=args.input or "",
    )
    _write(args.output, format_instance(target))
    if args.mapping:
        _write(args.mapping, format_mapping(mapping))
    return EXIT_OK


def _start_for(kind: str, inst, start: Optional[str]):
    if kind == "plom":
        if start:
            return parse_state(_read(start))
        return initial_state(inst)
    if kind == "cgame":
        return tuple(parse_profile(_read(start))) if start else (0,) * inst.num_players
    width = inst.num_inputs if kind == "circuit" else inst.num_vars
    bits = _bits(start) if start else (0,) * width
    if len(bits) != width:
        raise UsageError(f"start needs {width} bits")
    return bits


def cmd_solve(args) -> int:
    kind, inst = load_instance(args.instance)
    prob = problem_for(kind, inst)
    if args.restarts:
        rng = random.Random(args.seed)
        starts = [prob.random_solution(rng) for _ in range(args.restarts)]
    else:
        starts = [_start_for(kind, inst, args.start)]
    out, traces, status = [], [], EXIT_OK
    if args.trace or args.workers <= 1:
        results = []
        for s in starts:
            tr = run_standard(prob.search(s, args.pivot), max_steps=args.max_steps, record_trace=bool(args.trace))
            if args.trace:
                traces.append(tr.format())
            results.append((tr.terminated, tr.endpoint))
    else:
        results = run_restarts(prob, starts, args.pivot, args.max_steps, args.workers)
    for done, end in results:
        out.append(prob.format(end))
        if not done:
            status = EXIT_FAIL
            print(f"max-steps {args.max_steps} reached before a local optimum", file=sys.stderr)
    _write(args.output, "".join(out))
    if args.trace:
        _write(args.trace, "".join(traces))
    return status


def cmd_verify(args) -> int:
    skind, src = load_instance(args.source)
    tkind, tgt = load_instance(args.target)
    mapping = parse_mapping(_read(args.mapping))
    if mapping.kind == "circuit-2sat":
        return _verify_circuit_eval(args, src, tgt, mapping)
    rep = validate_reduction(
        problem_for(skind, src), problem_for(tkind, tgt), mapping, mode=args.mode, restarts=args.restarts or 100,
        seed=args.seed, max_steps=args.max_steps, pivot=args.pivot, workers=args.workers,
    )
    _write(args.output, rep.format())
    return EXIT_OK if rep.ok else EXIT_FAIL


def _verify_circuit_eval(args, circuit, cnf, mapping) -> int:
    from .reductions import extract_gate_values
    from .circuit import evaluate_nodes

    x = _bits(mapping.meta["input"])
    want = tuple(evaluate_nodes(circuit, x)[circuit.num_inputs:])
    rep = enumerate_local_optima(CnfProblem(cnf))
    bad = [o for o in rep.local_optima if extract_gate_values(mapping, o) != want]
    lines = [f"kind {mapping.kind}", f"local_optima {len(rep.local_optima)}", f"expected_gates {bitstring(want)}",
             f"counterexamples {len(bad) + (len(rep.local_optima) != 1)}"]
    lines += [f"counterexample assign {bitstring(o)}" for o in bad]
    ok = not bad and len(rep.local_optima) == 1
    lines.append(f"result {'ok' if ok else 'FAIL'}")
    _write(args.output, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_extract(args) -> int:
    mapping = parse_mapping(_read(args.mapping))
    sol = parse_solution(_read(args.solution))
    try:
        x = extract_solution(mapping, sol)
    except ExtractionError as exc:
        print(f"extraction error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write(args.output, "assign " + bitstring(x) + "\n")
    return EXIT_OK


def cmd_audit(args) -> int:
    kind, inst = load_instance(args.instance)
    lines = [f"format {kind}"]
    if kind == "circuit":
        lines.append(f"inputs {inst.num_inputs} gates {inst.num_gates} outputs {inst.num_outputs}")
    elif kind == "lexcnf":
        lines.append(f"vars {inst.num_vars} clauses {inst.m} k {inst.k} d {inst.d} forbidden {len(inst.forbidden)}")
    elif kind == "plom":
        lines.append(f"positions {inst.num_positions} generators {inst.num_generators} flavor {inst.flavor}")
    else:
        lines.append(f"players {inst.num_players} resources {inst.num_resources} alpha {inst.alpha}")
    if format_instance(inst) != _read(args.instance):
        lines.append("roundtrip differs")
        _write(args.output, "\n".join(lines) + "\nresult FAIL\n")
        return EXIT_FAIL
    status = EXIT_OK
    if args.mapping or args.source:
        if not (args.mapping and args.source):
            raise UsageError("audit needs both --source and --mapping to check a reduction")
        mapping_text = _read(args.mapping)
        mapping = parse_mapping(mapping_text)
        _, src = load_instance(args.source)
        tag = tag_for_kind(mapping.kind)
        try:
            target, fresh = run_reduction(tag, src, **options_from_mapping(mapping))
        except AuditError as exc:
            lines.append(f"audit error: {exc}")
            status = EXIT_FAIL
        else:
            same_t = format_instance(target) == format_instance(inst)
            same_m = format_mapping(fresh) == mapping_text
            lines.append(f"reduction {mapping.kind} target {'matches' if same_t else 'differs'}"
                         f" mapping {'matches' if same_m else 'differs'}")
            if not (same_t and same_m):
                status = EXIT_FAIL
    lines.append("result " + ("ok" if status == EXIT_OK else "FAIL"))
    _write(args.output, "\n".join(lines) + "\n")
    return status


# ---------------------------------------------------------------------------
# parser

def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="seed for random generation and restarts")
    p.add_argument("--pivot", choices=("first", "best"), default=d("first"))
    p.add_argument("--max-steps", type=int, default=d(DEFAULT_MAX_STEPS))
    p.add_argument("--restarts", type=int, default=d(0), help="random-restart count (0 = single run)")
    p.add_argument("--workers", type=int, default=d(1), help="processes for random restarts")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lexpls", description="Lexicographic local search problems and reductions")
    _global_flags(ap, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a random instance")
    g.add_argument("kind", choices=("circuit", "lexcnf"))
    g.add_argument("--n", type=int, default=3)
    g.add_argument("--gates", type=int, default=4)
    g.add_argument("--outputs", type=int, default=1)
    g.add_argument("--m", type=int, default=6)
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--d", type=int, default=1)
    g.add_argument("--min-width", type=int, default=1)
    g.add_argument("--cover-all", action="store_true")
    g.add_argument("--forbid", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("reduce", parents=[common], help="compile a source instance")
    r.add_argument("source")
    r.add_argument("--to", required=True, choices=sorted(REDUCTIONS))
    r.add_argument("--forbid-input-pairs", action="store_true")
    r.add_argument("--alpha", default="2")
    r.add_argument("--delay", choices=("step", "exponential"), default="step")
    r.add_argument("--input", help="input bits for circuit-2sat")
    r.add_argument("-o", "--output")
    r.add_argument("--mapping", help="where to write the solution mapping")
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", parents=[common], help="run the standard algorithm")
    s.add_argument("instance")
    s.add_argument("--start", help="start bits, or a profile/orbit file")
    s.add_argument("--trace")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", parents=[common], help="check a reduction against the brute-force oracle")
    v.add_argument("source")
    v.add_argument("target")
    v.add_argument("mapping")
    v.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("extract", parents=[common], help="map a target solution back to the source")
    e.add_argument("mapping")
    e.add_argument("solution")
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_extract)

    a = sub.add_parser("audit", parents=[common], help="parse, round-trip and re-derive an instance")
    a.add_argument("instance")
    a.add_argument("--source")
    a.add_argument("--mapping")
    a.add_argument("-o", "--output")
    a.set_defaults(func=cmd_audit)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.max_steps < 0 or args.restarts < 0 or args.workers < 1:
        print("error: --max-steps and --restarts must be non-negative, --workers positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except SpaceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AuditError as exc:
        print(f"audit error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, OSError) + PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
