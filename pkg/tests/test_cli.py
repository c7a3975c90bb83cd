import json
import os
import subprocess
import sys

import pytest

from hyft.cli import load_declarations, main
from hyft.syntax import (
    NAT, Arrow, free_vars, from_json, parse_formula, parse_term, parse_type,
)
from hyft.typecheck import type_of


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


@pytest.mark.parametrize("argv, expected", [
    (["eval", "FST (PAIR 7 1)"], "7"),
    (["types", "--alpha", "N->N"], "plus: (N->N)*(N->N->N->N), minus: N*N"),
    (["translate", "--mode", "ee", "ext(x:N)"], "0==0"),
    (["types", "N*N->N"], "N*N->N"),
])
def test_documented_outputs(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == expected


def test_input_errors_exit_1(capsys):
    code, _, err = run(capsys, "eval", "x:N")
    assert code == 1 and "closed" in err
    code, _, err = run(capsys, "eval", "PAIR 1 2")
    assert code == 1 and "type N" in err
    code, _, err = run(capsys, "eval", "SUC (")
    assert code == 1 and "position" in err
    code, _, err = run(capsys, "translate", "--mode", "star", "ext(x:N)")
    assert code == 1


def test_exactly_one_input_source(capsys, tmp_path):
    src = tmp_path / "t.txt"
    src.write_text("SUC 4 -- five\n")
    assert run(capsys, "eval", "--file", str(src))[:2] == (0, "5")
    code, _, err = run(capsys, "eval", "3", "--file", str(src))
    assert code == 1 and "not both" in err
    assert run(capsys, "eval")[0] == 1


def test_internal_breach_exits_2(capsys, monkeypatch):
    import hyft.cli as cli

    def broken(_):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "type_minus", broken)
    code, _, err = run(capsys, "types", "--alpha", "N")
    assert code == 2 and "internal error" in err


def test_normalize_reports_fuel(capsys):
    code, out, _ = run(capsys, "normalize", "--fuel", "3", "REC 0 (K[N->N,N] SUC) 9")
    assert code == 1 and "fuel exhausted" in out
    code, out, _ = run(capsys, "normalize", "REC 0 (K[N->N,N] SUC) 9")
    assert code == 0 and out.splitlines()[0] == "9"


def test_fuel_from_environment():
    env = dict(os.environ, HYFT_FUEL="2")
    cmd = [sys.executable, "-m", "hyft", "eval", "REC 0 (K[N->N,N] SUC) 9"]
    low = subprocess.run(cmd, env=env, capture_output=True, text=True)
    assert low.returncode == 1 and "error" in low.stderr
    env["HYFT_FUEL"] = "1000"
    ok = subprocess.run(cmd, env=env, capture_output=True, text=True)
    assert ok.returncode == 0 and ok.stdout.strip() == "9"


@pytest.mark.parametrize("mode", ["star", "ee", "unfold-eq", "alpha", "mr"])
def test_json_output_round_trips(capsys, mode):
    text = "forall f:N->N. ext(f) -> f 0 = f 1"
    if mode == "star":
        text = "forall f:N->N. exists x:N. f x == f 1"
    code, out, _ = run(capsys, "--json", "translate", "--mode", mode, text)
    assert code == 0
    payload = json.loads(out)
    formula = from_json(payload["formula"])
    code, plain, _ = run(capsys, "translate", "--mode", mode, text)
    printed = plain.splitlines()[-1]
    env = {}
    if mode == "mr":
        env[payload["realizer"]["name"]] = from_json(payload["realizer"]["type"])
    assert parse_formula(printed, env) == formula


def test_json_terms_round_trip(capsys):
    code, out, _ = run(capsys, "--json", "witness-cext")
    assert code == 0
    payload = json.loads(out)
    z = from_json(payload["term"])
    code, plain, _ = run(capsys, "witness-cext")
    assert parse_term(plain.splitlines()[0]) == z

    code, out, _ = run(capsys, "--json", "retract", "(N->N)->N")
    payload = json.loads(out)
    assert from_json(payload["source"]) == Arrow(Arrow(NAT, NAT), NAT)


@pytest.mark.parametrize("schema", ["hybrid", "ext", "ext-prime", "cext"])
def test_axioms_are_printed_closed(capsys, schema):
    code, out, _ = run(capsys, "axioms", "--schema", schema, "--sigma", "N->N")
    assert code == 0
    for line in out.splitlines():
        parse_formula(line)


def test_axioms_eq_ext_flag(capsys):
    _, without, _ = run(capsys, "axioms", "--schema", "hybrid")
    _, with_flag, _ = run(capsys, "axioms", "--schema", "hybrid", "--with-eq-ext")
    assert len(with_flag.splitlines()) == len(without.splitlines()) + 1


DECLS = """\
-- arithmetic
two : N = SUC (SUC 0)
double : N -> N = \\n:N. REC 0 (K[N->N,N] (\\m:N. SUC (SUC m))) n
goal twice = double two == 4
goal wrong = double 1 == 3
"""


def test_check_file(capsys, tmp_path):
    path = tmp_path / "arith.hyft"
    path.write_text(DECLS)
    code, out, _ = run(capsys, "check", str(path))
    assert code == 0
    assert out.splitlines() == ["ok two : N", "ok double : N->N",
                                "ok goal twice", "ok goal wrong"]
    code, out, _ = run(capsys, "check", "--model", str(path))
    assert "ok goal twice: Holds" in out
    assert "ok goal wrong: Fails" in out


def test_check_file_errors(capsys, tmp_path):
    path = tmp_path / "bad.hyft"
    path.write_text("two : N = SUC 0\nbad : N = PAIR 1 2\n")
    code, _, err = run(capsys, "check", str(path))
    assert code == 1 and ":2:" in err
    path.write_text("two : N = 2\ntwo : N = 3\n")
    assert run(capsys, "check", str(path))[0] == 1
    path.write_text("this is not a declaration\n")
    assert run(capsys, "check", str(path))[0] == 1
    assert run(capsys, "check", str(tmp_path / "missing"))[0] == 1


def test_declarations_substitute_earlier_names():
    decls = load_declarations("a : N = 3\nb : N -> N = K[N,N] a\ngoal g = b 0 == a")
    assert not free_vars(decls.terms["b"])
    assert type_of(decls.terms["b"]) == parse_type("N -> N")
    assert decls.goals["g"] == parse_formula("K[N,N] 3 0 == 3")
