import json
import subprocess
import sys

import pytest

from kcones.cli import main
from kcones.corpus import gen_composable_pair
from kcones.documents import MorphismBundle, document_of, emit


def run_cli(args, **kw):
    return subprocess.run([sys.executable, "-m", "kcones.cli", *args],
                          capture_output=True, text=True, **kw)


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus")
    result = run_cli(["corpus", "--write", str(path)])
    assert result.returncode == 0
    return path


def test_corpus_run_all_passes(corpus_dir):
    result = run_cli(["corpus", "--run-all"])
    assert result.returncode == 0
    assert "FAIL" not in result.stdout
    assert "mutant-cond3" in result.stdout


def test_corpus_listing():
    result = run_cli(["corpus"])
    assert result.returncode == 0
    assert "razak" in result.stdout and "expected" not in result.stderr


def test_validate_exit_codes(corpus_dir):
    ok = run_cli(["validate", str(corpus_dir / "coord-2.ej")])
    assert ok.returncode == 0
    assert json.loads(ok.stdout)["verdict"] == "ok"
    bad = run_cli(["validate", str(corpus_dir / "mutant-cond3.sj")])
    assert bad.returncode == 1
    report = json.loads(bad.stdout)
    assert any("condition-3" == v["code"] for v in report["violations"])


def test_roundtrip_exit_codes(corpus_dir):
    ok = run_cli(["roundtrip", str(corpus_dir / "coord-3.ej"), "--assert-identity"])
    assert ok.returncode == 0
    razak = run_cli(["roundtrip", str(corpus_dir / "razak.ej"), "--assert-identity"])
    assert razak.returncode == 1
    report = json.loads(razak.stdout)
    assert report["verdict"] == "mismatch"
    assert report["witness"]["component"] == "phantom"
    soft = run_cli(["roundtrip", str(corpus_dir / "razak.ej")])
    assert soft.returncode == 0


def test_apply_functors(corpus_dir, tmp_path):
    g = run_cli(["apply", "--functor", "g", str(corpus_dir / "coord-2.ej")])
    assert g.returncode == 0
    s_path = tmp_path / "coord2.sj"
    s_path.write_text(g.stdout)
    f = run_cli(["apply", "--functor", "f", str(s_path)])
    assert f.returncode == 0
    assert json.loads(f.stdout)["kind"] == "e-object"
    wrong = run_cli(["apply", "--functor", "f", str(corpus_dir / "coord-2.ej")])
    assert wrong.returncode == 2


def test_transport_cli(tmp_path):
    result = run_cli(["gen", "--kind", "s-morphism", "--seed", "3", "--blocks", "2",
                      "--cone-dim", "2"])
    assert result.returncode == 0
    m_path = tmp_path / "m.smj"
    m_path.write_text(result.stdout)
    t = run_cli(["transport", "--direction", "s2e", str(m_path)])
    assert t.returncode == 0
    e_path = tmp_path / "m.emj"
    e_path.write_text(t.stdout)
    back = run_cli(["transport", "--direction", "e2s", str(e_path)])
    assert back.returncode == 0
    assert json.loads(back.stdout)["kind"] == "s-morphism"


def test_compose_cli(tmp_path):
    b1, b2 = gen_composable_pair("s-morphism", 8, 2, 2)
    p1, p2 = tmp_path / "m1.smj", tmp_path / "m2.smj"
    p1.write_text(emit(document_of(b1)))
    p2.write_text(emit(document_of(b2)))
    result = run_cli(["compose", str(p1), str(p2)])
    assert result.returncode == 0
    assert json.loads(result.stdout)["kind"] == "s-morphism"
    mismatched = run_cli(["compose", str(p2), str(p1)])
    assert mismatched.returncode == 2


def test_compare_cli(corpus_dir):
    same = run_cli(["compare", str(corpus_dir / "coord-2.ej"), str(corpus_dir / "coord-2.ej"),
                    "--search"])
    assert same.returncode == 0
    diff = run_cli(["compare", str(corpus_dir / "coord-2.ej"), str(corpus_dir / "coord-3.ej")])
    assert diff.returncode == 1


def test_validate_morphism_documents(corpus_dir):
    zeta = run_cli(["validate", str(corpus_dir / "mutant-zeta.emj")])
    assert zeta.returncode == 1
    assert any(v["code"] == "compatibility" for v in json.loads(zeta.stdout)["violations"])
    scale = run_cli(["validate", str(corpus_dir / "mutant-scale.smj")])
    assert scale.returncode == 1
    assert any(v["code"] == "scale" for v in json.loads(scale.stdout)["violations"])


def test_compare_with_witness_files(corpus_dir, tmp_path):
    from kcones.corpus import corpus
    from kcones.stevens import identity_s_morphism
    af = [e for e in corpus() if e.name == "af-2"][0].document.value
    ident = identity_s_morphism(af)
    w_path = tmp_path / "ident.smj"
    w_path.write_text(emit(document_of(MorphismBundle(ident, af, af))))
    result = run_cli(["compare", str(corpus_dir / "af-2.sj"), str(corpus_dir / "af-2.sj"),
                      "--witness", str(w_path), str(w_path)])
    assert result.returncode == 0


def test_transport_with_context_overrides(tmp_path):
    result = run_cli(["gen", "--kind", "s-morphism", "--seed", "4", "--blocks", "2",
                      "--cone-dim", "2"])
    m_path = tmp_path / "m.smj"
    m_path.write_text(result.stdout)
    doc = json.loads(result.stdout)
    src_path = tmp_path / "src.sj"
    dst_path = tmp_path / "dst.sj"
    src_path.write_text(json.dumps({"kind": "s-object", "version": "1",
                                    "payload": doc["payload"]["src"]}, sort_keys=True, indent=1) + "\n")
    dst_path.write_text(json.dumps({"kind": "s-object", "version": "1",
                                    "payload": doc["payload"]["dst"]}, sort_keys=True, indent=1) + "\n")
    t = run_cli(["transport", "--direction", "s2e", str(m_path),
                 "--src", str(src_path), "--dst", str(dst_path)])
    assert t.returncode == 0


def test_gen_determinism_cli():
    a = run_cli(["gen", "--kind", "e-object", "--seed", "7", "--blocks", "3"])
    b = run_cli(["gen", "--kind", "e-object", "--seed", "7", "--blocks", "3"])
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_parse_and_usage_errors(tmp_path):
    bad = tmp_path / "bad.ej"
    bad.write_text("{oops")
    assert run_cli(["validate", str(bad)]).returncode == 2
    assert run_cli(["validate", str(tmp_path / "missing.ej")]).returncode == 2
    assert run_cli(["frobnicate"]).returncode == 2
    assert run_cli(["gen", "--kind", "s-object", "--seed", "1", "--blocks", "9"]).returncode == 2


def test_report_directory(tmp_path):
    out = tmp_path / "report"
    result = run_cli(["corpus", "--run-all", "--report-dir", str(out)])
    assert result.returncode == 0
    assert (out / "corpus_results.csv").exists()
    assert (out / "corpus_matrix.png").exists()
    assert (out / "corpus_summary.png").exists()
    header = (out / "corpus_results.csv").read_text().splitlines()[0]
    assert header == "entry,check,expected,actual,matches"


def test_main_entry_point_in_process(capsys, tmp_path):
    code = main(["corpus"])
    assert code == 0
    out = capsys.readouterr().out
    assert "coord-0" in out
