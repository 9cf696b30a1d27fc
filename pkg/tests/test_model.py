import dataclasses
import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from connexive.corpus import models
from connexive.formula import parse
from connexive.model import (
    RULE_CONDITIONS, FiniteAlgebra, FiniteNModel, HornCondition, IncompatibilityRelation,
    ModelError, check_horn, class_check, class_witness, consequence, designated,
    evaluate, holds, model_from_dict, model_to_dict, validate_algebra, validate_nmodel,
)
from oracles import eval_by_names
from strategies import assignments, formulas

MS = models()
VALID = [n for n in MS if n != "M4"]


def _with_perp(m, **changes):
    return dataclasses.replace(m, perp=dataclasses.replace(m.perp, **changes))


@pytest.mark.parametrize("name", VALID)
def test_valid_corpus_models(name):
    rep = validate_nmodel(MS[name])
    assert rep.ok, rep.violations[:3]


def test_m4_fails_specific_conditions():
    rep = validate_nmodel(MS["M4"])
    assert set(rep.failed_conditions()) == {"c", "f", "h"}


def test_m4_has_no_designated_set_at_all():
    m = MS["M4"]
    a = m.algebra
    n = a.size
    for k in range(n + 1):
        for F in itertools.combinations(range(n), k):
            F = frozenset(F)
            pairs = frozenset((x, y) for x in range(n) for y in range(n) if a.star[a.circ[x][y]] in F)
            rel = IncompatibilityRelation(pairs, frozenset(x for x in range(n) if a.star[x] in F), F)
            assert not validate_nmodel(FiniteNModel(a, rel)).ok


def test_m1_without_forced_pair_fails_exactly_at_c():
    m = MS["M1"]
    d = m.algebra.index("d")
    bad = _with_perp(m, pairs=m.perp.pairs - {(d, d)})
    rep = validate_nmodel(bad)
    assert [(v.condition, v.witness) for v in rep.violations] == [("c", ("d", "d"))]


def test_removing_a_constant_pair_is_caught():
    m = MS["M2"]
    a_ = m.algebra.index("a")
    assert a_ in m.perp.to_false
    rep = validate_nmodel(_with_perp(m, to_false=m.perp.to_false - {a_}))
    assert not rep.ok and "d" in rep.failed_conditions()


def test_star_mutation_is_caught():
    m = MS["M2"]
    s = list(m.algebra.star)
    s[0], s[1] = s[1], s[0]
    alg = dataclasses.replace(m.algebra, star=tuple(s))
    assert not validate_nmodel(dataclasses.replace(m, algebra=alg)).ok


def test_non_commutative_table_is_caught():
    m = MS["M5"]
    t = [list(r) for r in m.algebra.tensor]
    t[0][1] = (t[0][1] + 1) % 4
    alg = dataclasses.replace(m.algebra, tensor=tuple(map(tuple, t)))
    assert "tensor-commutative" in validate_algebra(alg).failed_conditions()


def test_associativity_check_detects_a_broken_table():
    assert validate_algebra(MS["M1"].algebra, require_assoc=True).ok
    # fix x⊗y for x,y ≠ a and make a absorbing except a⊗a = b: (a⊗a)⊗b ≠ a⊗(a⊗b)
    n = 3
    t = [[2] * n for _ in range(n)]
    for i in range(n):
        t[0][i] = t[i][0] = 0
    t[0][0] = 1
    alg = FiniteAlgebra(("a", "b", "c"), tuple(map(tuple, t)), tuple(map(tuple, t)), (0, 1, 2))
    assert "tensor-associative" in validate_algebra(alg, require_assoc=True).failed_conditions()


def test_algebra_input_errors():
    with pytest.raises(ModelError):
        FiniteAlgebra.from_names("ab", ["a b", "b a"], ["a b", "b"], "b a")
    with pytest.raises(ModelError):
        FiniteAlgebra.from_names("ab", ["a b", "b a"], ["a b", "b a"], "b z")
    with pytest.raises(ModelError):
        FiniteAlgebra(("@t",), ((0,),), ((0,),), (0,))


@pytest.mark.parametrize("name, F", [("M1", "ace"), ("M2", "ac"), ("M3", "ae"), ("M5", "bc")])
def test_designated_sets(name, F):
    assert designated(MS[name]) == frozenset(F)


@pytest.mark.parametrize("name, tags, not_tags", [
    ("M2", {"di", "trans1", "s", "I", "I2", "regular", "N"}, {"full", "trivial"}),
    ("M3", {"trans1", "di"}, {"regular"}),
    ("M5", {"trans1", "regular", "full"}, set()),
    ("T1", {"N", "trivial", "I", "I2", "s", "di", "trans1", "full"}, {"regular"}),
])
def test_class_membership(name, tags, not_tags):
    m = MS[name]
    for t in tags:
        assert class_check(m, t), t
    for t in not_tags:
        assert class_witness(m, t) is not None, t


def test_irregularity_witness_in_m3():
    assert class_witness(MS["M3"], "regular") == ("a", "b")


@settings(max_examples=60)
@given(formulas, st.sampled_from(VALID), st.data())
def test_compiled_evaluation_matches_direct(f, name, data):
    m = MS[name]
    asg = data.draw(assignments(m.carrier))
    assert evaluate(m, f, asg) == eval_by_names(m, f, asg)


def test_evaluate_accepts_strings_and_reports_unassigned():
    m = MS["M2"]
    assert evaluate(m, "p => (p* => p)", {"p": "a"}) == "b"
    with pytest.raises(ModelError):
        evaluate(m, "p & q", {"p": "a"})


def test_holds_returns_falsifying_assignment():
    m = MS["M2"]
    out = holds(m, parse("(p o q) => (p => q)"))
    assert not out
    v = evaluate(m, "(p o q) => (p => q)", out.witness)
    assert v not in designated(m)


def test_identity_holds_everywhere():
    for name in VALID:
        assert holds(MS[name], "p => p")


def test_consequence_mp_and_failure():
    m = MS["M2"]
    assert consequence(m, ["p", "p => q"], "q")
    out = consequence(m, ["p"], "p & q")
    assert not out and evaluate(m, "p", out.witness) in designated(m)


def test_horn_conditions():
    assert check_horn(MS["M2"], RULE_CONDITIONS["DI"])
    assert check_horn(MS["M2"], RULE_CONDITIONS["A8"])
    cond = HornCondition.of(["p"], "p*", "bogus")
    assert not check_horn(MS["M2"], cond)


@pytest.mark.parametrize("name", list(MS))
def test_json_roundtrip(name):
    m = MS[name]
    d = json.loads(json.dumps(model_to_dict(m)))
    assert model_from_dict(d) == m


def test_json_rejects_missing_fields():
    d = model_to_dict(MS["M5"])
    del d["star"]
    with pytest.raises(ModelError):
        model_from_dict(d)
    d = model_to_dict(MS["M5"])
    d["incompat"].append(["@t", "a"])
    with pytest.raises(ModelError):
        model_from_dict(d)
