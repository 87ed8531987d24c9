import io

import pytest

from queerkit import classical as cl
from queerkit import quantum as qu
from queerkit.freealg import Element, Identity
from queerkit.scalar import Q
from queerkit.verify import (
    CorpusConfig,
    CorpusParse,
    EngineDisagreement,
    IN_SCOPE_LABELS,
    Report,
    build_corpus,
    check_identity,
    coverage_report,
    dump_corpus,
    load_corpus,
    missing_labels,
    run_corpus,
)

E = Element.generator
SMALL = CorpusConfig(n_max=2, exp_max=1, relations_n_max=2)


def test_odd_square_passes():
    report = run_corpus(CorpusConfig(n_max=2, exp_max=1, relations_n_max=2, only="odd-square"))
    assert report.results and report.ok
    assert all(r.status == "verified" for r in report.results)


def test_quantum_relation_passes_on_both_engines():
    corpus = [rec for rec in build_corpus(SMALL) if rec.id.split("/")[0] == "QQ4"]
    report = run_corpus(SMALL, corpus=corpus)
    assert report.results and report.ok
    for r in report.results:
        assert r.engines["L"] == r.engines["X"] == r.engines["rep"] == "pass"


def test_empty_corpus():
    report = run_corpus(SMALL, corpus=[])
    assert report.results == [] and report.ok
    assert report.to_json()["results"] == []


def test_failing_record_has_diagnostics():
    rec = Identity("probe/wrong", "Prop Uqn", E(cl.e(1)) * E(cl.f(1)), E(cl.f(1)) * E(cl.e(1)), {"n": 2}, ("classical", "lie"))
    res = check_identity(rec)
    assert res.status == "failed"
    assert "lhs:" in res.diagnostics and "classical normal form" in res.diagnostics


def test_rep_only_status():
    lhs = E(qu.K(1)) * E(qu.K(2))
    rec = Identity("probe/rep", "Thm q-surjective", lhs, Element.scalar(Q**2), {"n": 2, "r": 2}, ("rep",))
    assert check_identity(rec).status == "representation-consistent"


def test_strict_raises_on_disagreement():
    # K1 K2 = q^2 holds on V^(x)2 but is not an identity of the algebra
    lhs = E(qu.K(1)) * E(qu.K(2))
    rec = Identity("probe/split", "Eq KX", lhs, Element.scalar(Q**2), {"n": 2, "r": 2}, ("L", "rep"))
    report = run_corpus(SMALL, corpus=[rec])
    assert report.disagreements and not report.ok
    with pytest.raises(EngineDisagreement) as info:
        run_corpus(SMALL, corpus=[rec], strict=True)
    assert info.value.report.disagreements[0].key == rec.key


def test_coverage():
    cover = coverage_report()
    assert missing_labels(cover) == []
    assert len(cover["Lemma q-ppee"]) == 8
    assert len(cover["Prop div-root"]) >= 5
    assert missing_labels(cover, IN_SCOPE_LABELS + ("Lemma nowhere",)) == ["Lemma nowhere"]


def test_corpus_json_lines_round_trip():
    corpus = build_corpus(CorpusConfig(n_max=2, exp_max=1, relations_n_max=2, only="q-p"))
    buf = io.StringIO()
    dump_corpus(corpus, buf)
    buf.seek(0)
    back = load_corpus(buf)
    assert [r.key for r in back] == [r.key for r in corpus]
    assert all(a.difference() == b.difference() for a, b in zip(back, corpus))


def test_corpus_parse_error_names_line():
    buf = io.StringIO('\n{"id": "x"}\n')
    with pytest.raises(CorpusParse, match="line 2"):
        load_corpus(buf)


def test_parallel_run_keeps_order():
    config = CorpusConfig(n_max=2, exp_max=1, relations_n_max=2, only="Q")
    serial = run_corpus(config)
    parallel = run_corpus(config, jobs=2)
    assert [r.key for r in parallel.results] == [r.key for r in serial.results]
    assert parallel.to_json() == serial.to_json()


def test_report_json_and_table():
    report = run_corpus(CorpusConfig(n_max=2, exp_max=1, relations_n_max=2, only="q-pnoo"))
    assert isinstance(report, Report)
    d = report.to_json()
    assert d["results"][0]["status"] == "verified"
    assert "q-pnoo" in report.table()
