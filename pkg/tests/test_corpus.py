import pytest

from connexive.corpus import COMPUTED_VALUES, MODEL_IDS, corpus, lookup, models
from connexive.model import evaluate


def test_corpus_kinds():
    kinds = {}
    for e in corpus():
        kinds.setdefault(e.kind, []).append(e.id)
    assert set(kinds["model"]) == set(MODEL_IDS)
    assert kinds["poset"] == ["m2-poset"]
    assert len(kinds["proof"]) == 17
    assert len(kinds["computed-value"]) == len(COMPUTED_VALUES)
    ids = [e.id for e in corpus()]
    assert len(ids) == len(set(ids))


def test_lookup():
    assert lookup("M2").payload is models()["M2"]
    assert lookup("contraposition").kind == "proof"
    with pytest.raises(KeyError):
        lookup("nothing-here")


@pytest.mark.parametrize("cv", [c for c in COMPUTED_VALUES if c["kind"] == "eval"], ids=lambda c: c["id"])
def test_eval_values(cv):
    m = models()[cv["model"]]
    v = evaluate(m, cv["formula"], cv["assign"])
    assert v == cv["value"]
    assert (m.algebra.index(v) in m.perp.to_false) == cv["designated"]


def test_m3_irregularity_steps():
    m = models()["M3"]
    asg = {"p": "a", "q": "b"}
    assert evaluate(m, "p => q", asg) == "b"
    assert evaluate(m, "q => p", asg) == "a"
    assert evaluate(m, "(p => q) & (q => p)", asg) == "d"
    assert evaluate(m, "p =/= q", asg) == "b"


def test_m4_and_m5_incompatibility_values():
    for name, formula, value in (("M4", "(p => q)*", "b"), ("M5", "(p* (+) q)*", "d")):
        m = models()[name]
        a = m.algebra
        v = evaluate(m, formula, {"p": "a", "q": "b"})
        assert v == value
        assert m.perp.perp(a.index("a"), a.index(v))
        assert not m.perp.perp(a.index("a"), a.star[a.index("b")])


def test_models_are_cached_and_named():
    assert models() is models()
    for name, m in models().items():
        assert m.name == name and "Nw" in m.declared_classes
