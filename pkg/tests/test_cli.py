import json

import pytest

from fixcofe.cli import main

T_SOURCE = "f(x) = if x = 0 then 0 else f(f(x - 1))\n"


@pytest.fixture
def tdef(tmp_path):
    p = tmp_path / "nested.fixdef"
    p.write_text(T_SOURCE, encoding="utf-8")
    return str(p)


@pytest.fixture
def write(tmp_path):
    def _write(text, name="d.fixdef"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return _write


def run_json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out), out


# -- solve --------------------------------------------------------------------

def test_solve_nested_zero(capsys, tdef):
    code, data, _ = run_json(capsys, "solve", "--def", tdef, "--depth", "50", "--seed-fn", "zero")
    assert code == 0
    assert data["prefix"] == [0] * 50
    assert list(data) == ["name", "depth", "prefix", "seed", "stabilized_at"]
    assert data["name"] == "f" and data["seed"] == "zero" and data["depth"] == 50


def test_solve_constant_operator(capsys, write):
    code, data, _ = run_json(capsys, "solve", "--def", write("g(x) = x + 1"), "--depth", "3")
    assert code == 0
    assert data["prefix"] == [1, 2, 3]
    assert data["stabilized_at"] == 1


def test_solve_depth_zero(capsys, tdef):
    code, data, _ = run_json(capsys, "solve", "--def", tdef, "--depth", "0")
    assert code == 0 and data["prefix"] == []


def test_solve_output_deterministic(capsys, tdef):
    outs = {run_json(capsys, "solve", "--def", tdef, "--depth", "20", "--seed-fn", "id")[2]
            for _ in range(3)}
    assert len(outs) == 1


def test_solve_csv(capsys, write):
    assert main(["solve", "--def", write("g(x) = x + 1"), "--depth", "3", "--format", "csv"]) == 0
    assert capsys.readouterr().out == "index,value\n0,1\n1,2\n2,3\n"


def test_solve_text_mentions_heuristic(capsys, tdef):
    assert main(["solve", "--def", tdef, "--depth", "5"]) == 0
    out = capsys.readouterr().out
    assert "0 0 0 0 0" in out and "stabilized" in out


def test_parse_error_exit(capsys, write):
    assert main(["solve", "--def", write("h(x) = h(x"), "--depth", "3"]) == 2
    assert "byte 10" in capsys.readouterr().err


def test_overflow_exit(capsys, write):
    assert main(["solve", "--def", write("f(x) = 18446744073709551615 + x"), "--depth", "3"]) == 3


def test_bad_seed_fn(capsys, tdef):
    assert main(["solve", "--def", tdef, "--depth", "3", "--seed-fn", "const:-1"]) == 2


def test_missing_file(capsys, tmp_path):
    assert main(["solve", "--def", str(tmp_path / "nope"), "--depth", "3"]) == 2


# -- check --------------------------------------------------------------------

def test_check_contractive_counterexample_and_replay(capsys, tdef, tmp_path):
    code, data, out = run_json(capsys, "check", "contractive", "--def", tdef, "--depth", "4")
    assert code == 1
    assert data["verdict"] == "counterexample"
    w = data["witness"]
    a = dict(map(tuple, w["a"]["entries"]))
    b = dict(map(tuple, w["b"]["entries"]))
    assert a[0] == b[0]  # agree at argument 0
    assert data["observations"]["f(a)"]["payload"] != data["observations"]["f(b)"]["payload"]
    assert data["observations"]["f(a)"]["level"] == 2
    report = tmp_path / "r.json"
    report.write_text(out)
    assert main(["check", "contractive", "--def", tdef, "--replay", str(report)]) == 1
    assert "reproduced" in capsys.readouterr().out


def test_check_cfp_passes(capsys, tdef):
    code, data, _ = run_json(capsys, "check", "cfp", "--def", tdef, "--depth", "8",
                             "--samples", "1000")
    assert code == 0
    assert data["stats"]["premise_hits"] > 0
    assert data["rng_seed"] == 0


def test_check_lemma(capsys, tdef):
    code, data, _ = run_json(capsys, "check", "lemma", "--def", tdef, "--depth", "4",
                             "--enum-len", "4", "--enum-max", "3")
    assert code == 0 and data["stats"]["samples"] == 256


def test_check_lemma_identity_replay(capsys, write, tmp_path):
    ident = write("f(x) = f(x)")
    code, data, out = run_json(capsys, "check", "lemma", "--def", ident, "--depth", "2",
                               "--enum-len", "2", "--enum-max", "1")
    assert code == 1
    report = tmp_path / "lemma.json"
    report.write_text(out)
    assert main(["check", "lemma", "--def", ident, "--replay", str(report)]) == 1
    # the identity's witness is not a counterexample for the nested-zero operator
    nested = write(T_SOURCE, "t.fixdef")
    assert main(["check", "lemma", "--def", nested, "--replay", str(report)]) == 0


def test_check_cfp_counterexample_replays_iterates(capsys, write, tmp_path):
    # f(x) = 1 - f(x) flips between 0 and 1 pointwise and has no fixed point
    flip = write("f(x) = 1 - f(x)")
    code, data, out = run_json(capsys, "check", "cfp", "--def", flip, "--depth", "3",
                               "--enum-len", "0", "--samples", "50")
    assert code == 1
    report = tmp_path / "cfp.json"
    report.write_text(out)
    assert main(["check", "cfp", "--def", flip, "--replay", str(report)]) == 1


def test_check_ofe_laws(capsys):
    code, data, _ = run_json(capsys, "check", "ofe-laws", "--depth", "16")
    assert code == 0 and data["stats"]["samples"] == 1000


def test_check_json_deterministic(capsys, tdef):
    args = ("check", "cfp", "--def", tdef, "--depth", "5", "--samples", "100", "--rng-seed", "3")
    assert run_json(capsys, *args)[2] == run_json(capsys, *args)[2]


def test_check_enum_cap_env(capsys, tdef, monkeypatch):
    monkeypatch.setenv("FIXCOFE_ENUM_CAP", "100")
    assert main(["check", "lemma", "--def", tdef, "--depth", "4"]) == 3


def test_check_lemma_depth_too_large(capsys, tdef):
    assert main(["check", "lemma", "--def", tdef, "--depth", "5", "--enum-len", "4"]) == 2


# -- demo ---------------------------------------------------------------------

def test_demo_nested_zero(capsys):
    code, data, _ = run_json(capsys, "demo", "nested-zero", "--depth", "16")
    assert code == 0
    assert data["prefix"] == [0] * 16
    assert data["cfp"]["verdict"] == "pass"
    assert data["contractive"]["verdict"] == "counterexample"


def test_demo_naturals(capsys):
    code, data, _ = run_json(capsys, "demo", "naturals-stream", "--depth", "10")
    assert code == 0 and data["prefix"] == list(range(10))


def test_demo_fib(capsys):
    code, data, _ = run_json(capsys, "demo", "fib-stream", "--depth", "8")
    assert code == 0 and data["prefix"] == [0, 1, 1, 2, 3, 5, 8, 13]


def test_demo_cauchy(capsys):
    code, data, _ = run_json(capsys, "demo", "cauchy-coherent", "--depth", "16")
    assert code == 0
    assert data["raw_sequence"]["verdict"] == "counterexample"
    assert data["coherent_subsequence"]["verdict"] == "pass"
    assert data["limits_agree"] is True


def test_unknown_demo(capsys):
    assert main(["demo", "nope"]) == 4
