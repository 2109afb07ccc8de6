import pytest

from lexpls.cli import main


def run(tmp_path, *argv):
    return main([str(a) for a in argv])


def text(p):
    return p.read_text()


@pytest.fixture
def circuit(tmp_path):
    p = tmp_path / "c.txt"
    assert main(["gen", "circuit", "--n", "2", "--gates", "3", "--seed", "5", "-o", str(p)]) == 0
    return p


def test_gen_is_deterministic(tmp_path):
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    main(["--seed", "7", "gen", "lexcnf", "--n", "5", "--m", "6", "-o", str(a)])
    main(["gen", "lexcnf", "--n", "5", "--m", "6", "--seed", "7", "-o", str(b)])
    main(["gen", "lexcnf", "--n", "5", "--m", "6", "--seed", "8", "-o", str(c)])
    assert text(a) == text(b) != text(c)
    assert text(a).startswith("p lexcnf 5 6")


def test_gen_lexcnf_passes_audit(tmp_path):
    p, out = tmp_path / "f", tmp_path / "audit"
    main(["gen", "lexcnf", "--n", "4", "--m", "5", "--k", "3", "-o", str(p)])
    assert main(["audit", str(p), "-o", str(out)]) == 0
    assert text(out).endswith("result ok\n")


def test_gen_rejects_empty_circuit(tmp_path, capsys):
    assert main(["gen", "circuit", "--gates", "0"]) == 2
    assert "error" in capsys.readouterr().err


def test_usage_errors(tmp_path):
    assert main([]) == 2
    assert main(["reduce", str(tmp_path / "missing"), "--to", "4sat2flip"]) == 2
    bad = tmp_path / "bad"
    bad.write_text("p lexcnf 2 1 9 1\n1 -3 0\n")
    assert main(["solve", str(bad)]) == 2
    assert main(["solve", str(bad), "--max-steps", "-1"]) == 2


@pytest.mark.parametrize("tag", ["4sat2flip", "3sat2flip", "4sat1flip"])
def test_flip_pipeline(tmp_path, circuit, tag):
    cnf, mp, sol, x, rep = (tmp_path / s for s in ("cnf", "map", "sol", "x", "rep"))
    assert main(["reduce", str(circuit), "--to", tag, "-o", str(cnf), "--mapping", str(mp)]) == 0
    assert main(["solve", str(cnf), "-o", str(sol)]) == 0
    assert main(["extract", str(mp), str(sol), "-o", str(x)]) == 0
    assert text(x).startswith("assign ")
    assert main(["verify", str(circuit), str(cnf), str(mp), "--mode", "sampled", "--restarts", "30", "-o", str(rep)]) == 0
    assert "result ok" in text(rep)
    assert main(["audit", str(cnf), "--source", str(circuit), "--mapping", str(mp)]) == 0


@pytest.mark.parametrize("tag,extra", [
    ("abelian-plom", []),
    ("abelian-plom-2flip", []),
    ("cyclic-plom", []),
    ("congestion", ["--alpha", "3/2"]),
    ("congestion", ["--delay", "exponential"]),
])
def test_sat_pipeline(tmp_path, tag, extra):
    f, tgt, mp, sol, x, rep = (tmp_path / s for s in ("f", "t", "map", "sol", "x", "rep"))
    main(["gen", "lexcnf", "--n", "3", "--m", "3", "--k", "3", "--seed", "2", "-o", str(f)])
    assert main(["reduce", str(f), "--to", tag, *extra, "-o", str(tgt), "--mapping", str(mp)]) == 0
    assert main(["solve", str(tgt), "-o", str(sol)]) == 0
    assert main(["extract", str(mp), str(sol), "-o", str(x)]) == 0
    assert main(["audit", str(tgt), "--source", str(f), "--mapping", str(mp)]) == 0
    code = main(["verify", str(f), str(tgt), str(mp), "-o", str(rep)])
    assert code == (0 if "counterexamples 0" in text(rep) else 1)


def test_cyclic_verify_is_clean(tmp_path):
    f, tgt, mp, rep = (tmp_path / s for s in ("f", "t", "map", "rep"))
    f.write_text("p lexcnf 2 2 2 1\n1 0\n-1 2 0\n")
    main(["reduce", str(f), "--to", "cyclic-plom", "-o", str(tgt), "--mapping", str(mp)])
    assert main(["verify", str(f), str(tgt), str(mp), "-o", str(rep)]) == 0
    assert "target_local_optima 1" in text(rep)


def test_circuit_eval_pipeline(tmp_path, circuit):
    cnf, mp, sol, x, rep = (tmp_path / s for s in ("cnf", "map", "sol", "x", "rep"))
    assert main(["reduce", str(circuit), "--to", "circuit-2sat", "--input", "10", "-o", str(cnf), "--mapping", str(mp)]) == 0
    assert main(["verify", str(circuit), str(cnf), str(mp), "-o", str(rep)]) == 0
    assert "local_optima 1" in text(rep)
    assert main(["solve", str(cnf), "--restarts", "5", "-o", str(sol)]) == 0
    first = text(sol).splitlines(keepends=True)[0]
    sol.write_text(first)
    assert main(["extract", str(mp), str(sol), "-o", str(x)]) == 0


def test_wrong_source_kind(tmp_path, circuit):
    assert main(["reduce", str(circuit), "--to", "cyclic-plom"]) == 2


def test_audit_catches_tampered_target(tmp_path, circuit):
    cnf, mp = tmp_path / "cnf", tmp_path / "map"
    main(["reduce", str(circuit), "--to", "4sat2flip", "-o", str(cnf), "--mapping", str(mp)])
    lines = text(cnf).splitlines(keepends=True)
    lines[-1], lines[-2] = lines[-2], lines[-1]
    cnf.write_text("".join(lines))
    assert main(["audit", str(cnf), "--source", str(circuit), "--mapping", str(mp)]) == 1


def test_audit_requires_both_flags(tmp_path, circuit):
    assert main(["audit", str(circuit), "--mapping", str(circuit)]) == 2


def test_extract_bad_color_exits_one(tmp_path):
    f, tgt, mp, st = (tmp_path / s for s in ("f", "t", "map", "st"))
    f.write_text("p lexcnf 2 1 2 1\n1 2 0\n")
    main(["reduce", str(f), "--to", "cyclic-plom", "-o", str(tgt), "--mapping", str(mp)])
    from lexpls.plom import format_state, parse_plom, state_from_certificate
    inst = parse_plom(text(tgt))
    st.write_text(format_state(state_from_certificate(inst, "exponent", 2)))
    assert main(["extract", str(mp), str(st)]) == 1


def test_no_termination_exits_one(tmp_path):
    f = tmp_path / "f"
    f.write_text("p lexcnf 3 3 1 1\n1 0\n2 0\n3 0\n")
    assert main(["solve", str(f), "--max-steps", "1"]) == 1
    assert main(["solve", str(f), "--max-steps", "3"]) == 0


def test_space_too_large_exits_two(tmp_path):
    f, tgt, mp = tmp_path / "f", tmp_path / "t", tmp_path / "m"
    f.write_text("p lexcnf 21 0 1 1\n")
    main(["reduce", str(f), "--to", "congestion", "-o", str(tgt), "--mapping", str(mp)])
    assert main(["verify", str(f), str(tgt), str(mp)]) == 2


def test_reruns_are_byte_identical(tmp_path, circuit):
    outs = []
    for i in range(2):
        cnf, mp, rep = (tmp_path / f"{s}{i}" for s in ("cnf", "map", "rep"))
        main(["reduce", str(circuit), "--to", "4sat1flip", "-o", str(cnf), "--mapping", str(mp)])
        main(["verify", str(circuit), str(cnf), str(mp), "--mode", "sampled", "--restarts", "20", "--seed", "4", "-o", str(rep)])
        outs.append(tuple(text(p) for p in (cnf, mp, rep)))
    assert outs[0] == outs[1]


def test_solve_trace_and_pivot(tmp_path):
    f, tr, sol = tmp_path / "f", tmp_path / "tr", tmp_path / "sol"
    f.write_text("p lexcnf 2 2 1 1\n1 0\n2 0\n")
    assert main(["solve", str(f), "--pivot", "best", "--trace", str(tr), "-o", str(sol)]) == 0
    assert "11" in text(sol)
    assert text(tr)


def test_workers_do_not_change_output(tmp_path, circuit):
    cnf, mp = tmp_path / "cnf", tmp_path / "map"
    main(["reduce", str(circuit), "--to", "4sat2flip", "-o", str(cnf), "--mapping", str(mp)])
    outs = []
    for w in ("1", "2"):
        sol, rep = tmp_path / f"sol{w}", tmp_path / f"rep{w}"
        assert main(["solve", str(cnf), "--restarts", "12", "--seed", "3", "--workers", w, "-o", str(sol)]) == 0
        assert main(["--workers", w, "verify", str(circuit), str(cnf), str(mp), "--mode", "sampled",
                     "--restarts", "12", "-o", str(rep)]) == 0
        outs.append((text(sol), text(rep)))
    assert outs[0] == outs[1]
    assert main(["solve", str(cnf), "--workers", "0"]) == 2
