"""Exit criteria, one test per criterion, at the stated tolerances."""

import json
import time

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from fixcofe.checkers import (Sampler, check_cfp, check_contractive, check_ofe_laws,
                              check_partial_fixpoint_lemma)
from fixcofe.cli import cauchy_example, main
from fixcofe.dsl import compile_def, parse_def
from fixcofe.fixpoint import FixHandle, iterate_coherence_probe
from fixcofe.instances import (NATFUN, STREAM, Discrete, Later, Product, natfun_from_table,
                               stream_from_list)
from fixcofe.ofe import coherence_check, coherent_of_cauchy, limit
from fixcofe.operators import fib_operator, identity_operator, naturals_operator

from test_checkers import BrokenSpace

T_SOURCE = "f(x) = if x = 0 then 0 else f(f(x - 1))"


@pytest.fixture
def tdef(tmp_path):
    p = tmp_path / "nested.fixdef"
    p.write_text(T_SOURCE + "\n", encoding="utf-8")
    return str(p)


def T():
    return compile_def(parse_def(T_SOURCE))


@pytest.mark.parametrize("seed", ["zero", "id", "const:7"])
def test_criterion_1_solve_nested_zero_depth_64(capsys, tdef, seed):
    start = time.perf_counter()
    code = main(["solve", "--def", tdef, "--depth", "64", "--seed-fn", seed, "--format", "json"])
    elapsed = time.perf_counter() - start
    data = json.loads(capsys.readouterr().out)
    assert code == 0
    assert data["prefix"] == [0] * 64
    assert elapsed < 1.0


def test_criterion_2_T_not_contractive(capsys, tdef, tmp_path):
    code = main(["check", "contractive", "--def", tdef, "--depth", "4", "--enum-len", "6",
                 "--enum-max", "2", "--format", "json"])
    out = capsys.readouterr().out
    assert code == 1
    assert json.loads(out)["verdict"] == "counterexample"
    report = tmp_path / "contractive.json"
    report.write_text(out)
    assert main(["check", "contractive", "--def", tdef, "--replay", str(report)]) == 1
    assert "counterexample reproduced" in capsys.readouterr().out


def test_criterion_3_T_cfp_at_desk_scale(capsys, tdef):
    code = main(["check", "cfp", "--def", tdef, "--depth", "8", "--samples", "1000",
                 "--enum-len", "3", "--enum-max", "3", "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert code == 0 and data["verdict"] == "pass"
    assert data["stats"]["premise_hits"] > 0
    # each candidate source on its own, so none of them passes vacuously
    op = T()
    exhaustive = check_cfp(op, None, 8, exhaustive=(3, 3))
    sampled = check_cfp(op, Sampler(NATFUN), 8, samples=1000, iterate_seeds=0)
    iterates = check_cfp(op, Sampler(NATFUN), 8, samples=0, iterate_seeds=16)
    for r in (exhaustive, sampled, iterates):
        assert r.passed and r.premise_hits > 0
    assert sampled.samples >= 1000


def test_criterion_4_lemma_exhaustive(capsys, tdef):
    code = main(["check", "lemma", "--def", tdef, "--depth", "4", "--enum-len", "4",
                 "--enum-max", "3", "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert code == 0 and data["stats"]["samples"] == 4 ** 4
    negative = check_partial_fixpoint_lemma(identity_operator(NATFUN), 4, 3, 4)
    assert not negative.passed and negative.replay()


seed_tables = st.builds(natfun_from_table,
                        st.dictionaries(st.integers(0, 20), st.integers(0, 9), max_size=12),
                        st.integers(0, 9))
seed_streams = st.builds(stream_from_list, st.lists(st.integers(0, 9), max_size=12),
                         st.integers(0, 9))


def _coherent_and_monotone(op, seed, N=16):
    assert iterate_coherence_probe(op, seed, N).passed
    h = FixHandle(op, seed)
    inst = op.instance
    for n in range(N + 1):
        full = h.query(n)
        for m in range(n + 1):
            assert h.query(m) == inst.restrict(full, m)


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(seed_tables)
def test_criterion_5_iterates_coherent_T(seed):
    _coherent_and_monotone(T(), seed)


@settings(max_examples=40, deadline=None)
@given(seed_streams, st.sampled_from(["nat", "fib"]))
def test_criterion_5_iterates_coherent_streams(seed, which):
    op = naturals_operator() if which == "nat" else fib_operator()
    _coherent_and_monotone(op, seed)


def test_criterion_6_stream_demos(capsys):
    assert main(["demo", "naturals-stream", "--depth", "10", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["prefix"] == list(range(10))
    assert main(["demo", "fib-stream", "--depth", "8", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["prefix"] == [0, 1, 1, 2, 3, 5, 8, 13]
    for op in (naturals_operator(), fib_operator()):
        assert check_contractive(op, Sampler(STREAM), 8).passed


@pytest.mark.parametrize("inst", [NATFUN, STREAM, Discrete(), Product(NATFUN, STREAM),
                                  Later(NATFUN)], ids=str)
def test_criterion_7_ofe_law_suite(inst):
    r = check_ofe_laws(inst, Sampler(inst, seed=2024), 16, samples=1000)
    assert r.passed and r.samples >= 1000


def test_criterion_7_broken_fixture_negative_control():
    broken = BrokenSpace()
    r = check_ofe_laws(broken, Sampler(broken, seed=2024), 16, samples=1000)
    assert not r.passed and r.info["law"] == "nesting"


def test_criterion_8_cauchy_to_coherent(capsys):
    assert main(["demo", "cauchy-coherent", "--depth", "16", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["limits_agree"] is True
    s, m = cauchy_example()
    y = coherent_of_cauchy(NATFUN, s, m)
    assert coherence_check(NATFUN, y, 16).passed
    lim = limit(NATFUN, y)
    for n in range(17):
        # the original sequence converges to lim: every s(i) with i >= m(n) agrees below n
        for i in range(m(n), m(n) + 8):
            assert NATFUN.approx_eq(n, s(i), lim)
