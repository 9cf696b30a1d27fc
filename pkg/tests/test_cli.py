import json


from connexive.cli import main
from connexive.model import model_to_dict
from connexive.corpus import models


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_holds_negative_with_witness(capsys):
    code, out, _ = run(capsys, "holds", "corpus:M2", "(p o q) => (p => q)")
    assert code == 1 and "fails under p=" in out


def test_order_dm_ortho_line(capsys):
    code, out, _ = run(capsys, "order", "corpus:M2", "--dm", "--ortho")
    assert code == 0
    assert "ortholattice: yes, orthomodular: NO (witness" in out


def test_order_dot(capsys, tmp_path):
    dot = tmp_path / "m2.dot"
    code, _, _ = run(capsys, "order", "corpus:M2", "--poset", "--dot", str(dot))
    assert code == 0 and dot.read_text().startswith("digraph poset")


def test_order_on_reflexive_model_is_negative(capsys):
    code, out, _ = run(capsys, "order", "corpus:M1", "--ortho")
    assert code == 1 and "reflexive" in out


def test_parse_and_error_offset(capsys):
    assert run(capsys, "parse", "p => q")[1].startswith("(p o q*)*")
    code, _, err = run(capsys, "parse", "p => (")
    assert code == 2 and "byte 6" in err


def test_eval_json(capsys):
    code, out, _ = run(capsys, "--json", "eval", "corpus:M2", "p => (p* => p)", "--assign", "p=a")
    d = json.loads(out)
    assert code == 0 and d["value"] == "b" and d["designated"] is False


def test_eval_bad_assignment(capsys):
    assert run(capsys, "eval", "corpus:M2", "p", "--assign", "p=zz")[0] == 2


def test_model_validate(capsys, tmp_path):
    assert run(capsys, "model-validate", "corpus:M1", "--assoc")[0] == 0
    assert run(capsys, "model-validate", "corpus:M4")[0] == 1
    f = tmp_path / "m.json"
    f.write_text(json.dumps(model_to_dict(models()["M5"])))
    assert run(capsys, "model-validate", str(f))[0] == 0
    f.write_text("{not json")
    assert run(capsys, "model-validate", str(f))[0] == 2
    assert run(capsys, "model-validate", "corpus:Nope")[0] == 2


def test_consequence(capsys):
    assert run(capsys, "consequence", "corpus:M2", "q", "--premises", "p", "--premises", "p => q")[0] == 0
    code, out, _ = run(capsys, "consequence", "corpus:M2", "p & q", "--premises", "p")
    assert code == 1 and "under" in out


def test_class(capsys):
    code, out, _ = run(capsys, "class", "corpus:M3", "--tags", "trans1", "regular")
    assert code == 1 and "regular: NO" in out
    assert run(capsys, "class", "corpus:M2", "--tags", "di,trans1,s")[0] == 0
    assert run(capsys, "class", "corpus:M2", "--tags", "bogus")[0] == 2


def test_matrix(capsys):
    code, out, _ = run(capsys, "matrix", "corpus:M2", "--filter", "a,c", "--leibniz")
    assert code == 0 and "(identity)" in out
    assert run(capsys, "matrix", "corpus:M2", "--roundtrip")[0] == 0
    assert run(capsys, "matrix", "corpus:M4", "--roundtrip")[0] == 1


def test_proof_check(capsys, tmp_path):
    assert run(capsys, "proof-check", "corpus:boethius-1")[0] == 0
    assert run(capsys, "proof-check", "corpus:M2")[0] == 2
    assert run(capsys, "export-corpus", str(tmp_path))[0] == 0
    p = tmp_path / "proof-contraposition.json"
    d = json.loads(p.read_text())
    d["steps"][2]["formula"] = "q"
    p.write_text(json.dumps(d))
    code, out, _ = run(capsys, "proof-check", str(p))
    assert code == 1 and "line 3" in out


def test_export_corpus_roundtrips(capsys, tmp_path):
    assert run(capsys, "export-corpus", str(tmp_path))[0] == 0
    for name in models():
        assert run(capsys, "model-validate", str(tmp_path / f"model-{name}.json"))[0] == (1 if name == "M4" else 0)


def test_enumerate_and_countermodel(capsys):
    code, out, _ = run(capsys, "--json", "enumerate", "--size", "1")
    assert code == 0 and json.loads(out)["count"] == 1
    code, out, _ = run(capsys, "countermodel", "--size", "3", "--target", "p => p")
    assert code == 1 and "[1, 2, 3]" in out
    code, out, _ = run(capsys, "countermodel", "--size", "4", "--rule", "p => q |- q => p")
    assert code == 0 and "countermodel of size 4" in out
    assert run(capsys, "countermodel", "--size", "3")[0] == 2
    assert run(capsys, "enumerate", "--size", "2", "--class", "nope")[0] == 2


def test_reproduce_filter(capsys):
    code, out, _ = run(capsys, "reproduce", "--filter", "2")
    assert code == 0 and out.startswith("[PASS] criterion 2")
    assert run(capsys, "reproduce", "--filter", "zzz")[0] == 2


def test_usage_error(capsys):
    assert run(capsys, "no-such-command")[0] == 2
