import json

import pytest
from hypothesis import given

from connexive.calculus import (
    AXIOMS, SYSTEMS, Justification, Proof, Step, UnknownSystem, check_proof, check_step,
    corpus_proofs, get_system, instantiate, match_axiom, proof_from_dict, proof_to_dict,
)
from connexive.corpus import models
from connexive.formula import Star, Tensor, Var, parse
from connexive.model import holds
from connexive.reproduce import proof_mutations
from strategies import formulas

PROOFS = {p.name: p for p in corpus_proofs()}


@pytest.mark.parametrize("name", sorted(PROOFS))
def test_corpus_proof_checks(name):
    v = check_proof(PROOFS[name])
    assert v.ok, v.first_failure


@pytest.mark.parametrize("name", sorted(PROOFS))
def test_mutations_fail_at_expected_line(name):
    muts = proof_mutations(PROOFS[name])
    assert len(muts) >= 2
    for label, mutant, line in muts:
        v = check_proof(mutant)
        assert not v.ok and v.first_failure[0] == line, (label, v.first_failure)


def test_expected_conclusions():
    c = {n: p.conclusion for n, p in PROOFS.items()}
    assert c["aristotle-1"] == parse("(p => p*)*")
    assert c["boethius-1"] == parse("(p => q) => (p => q*)*")
    assert c["contraposition"] == parse("(p => q) => (q* => p*)")
    assert c["mp1"] == Var("q")
    for n in ("s-triviality", "d-triviality"):
        f = c[n]  # a formula together with its own negation
        assert isinstance(f, Tensor) and f.right == Star(f.left), n
    assert c["id1-triviality"] == parse("(p & p*) => p*")


def test_triviality_proofs_belong_to_trivial_systems():
    for n in ("s-triviality", "id1-triviality", "d-triviality"):
        assert get_system(PROOFS[n].system).known_trivial


@pytest.mark.parametrize("schema", sorted(AXIOMS))
def test_schema_matches_its_instances(schema):
    f = instantiate(schema, φ=parse("p & q"), ψ=parse("r*"), χ=parse("p o r"))
    assert match_axiom(f, schema) is not None


@given(formulas, formulas)
def test_a1_instances_match(a, b):
    f = instantiate("A1", φ=a)
    sigma = match_axiom(f, "A1")
    assert sigma is not None and sigma["φ"] == a


def test_non_instance_rejected():
    assert match_axiom(parse("p => q"), "A1") is None


def test_axioms_of_consistent_systems_hold_in_m2():
    m = models()["M2"]
    for ax in sorted(get_system("NL").axioms):
        assert holds(m, AXIOMS[ax]), ax


def test_theorem_mode_forbids_premises():
    p = PROOFS["contraposition"]
    bad = Proof(p.system, (Var("p"),), p.steps, p.name)
    v = check_proof(bad)
    assert not v.ok and v.first_failure[0] == 0


def test_consequence_mode_premise_index():
    p = PROOFS["mp1"]
    assert p.steps[0].just.kind == "premise"
    wrong = Step(p.steps[0].formula, Justification.premise(5))
    v = check_proof(Proof(p.system, p.premises, (wrong,) + p.steps[1:], p.name))
    assert v.first_failure == (1, "premise index 5 out of range")


def test_mp_premise_order_is_strict():
    p = Proof("NeL", (parse("p"), parse("p => q")), (
        Step(parse("p"), Justification.premise(0)),
        Step(parse("p => q"), Justification.premise(1)),
        Step(parse("q"), Justification.by("MP", 1, 2)),
    ))
    v = check_proof(p)
    assert v.first_failure[0] == 3
    ok = Proof(p.system, p.premises, p.steps[:2] + (Step(parse("q"), Justification.by("MP", 2, 1)),))
    assert check_proof(ok)


def test_forward_citation_rejected():
    p = Proof("NL", (), (Step(parse("q"), Justification.by("MP", 1, 1)),))
    assert "out of range" in check_step(p, 1)


def test_axiom_not_in_system():
    f = instantiate("AS1", φ=Var("p"), ψ=Var("q"), χ=Var("r"))
    p = Proof("NL", (), (Step(f, Justification.axiom("AS1")),))
    assert check_proof(p).first_failure == (1, "axiom AS1 is not in NL")
    assert check_proof(Proof("NLas", (), p.steps))


def test_rule_not_in_system():
    p = PROOFS["mp1"]
    steps = list(p.steps)
    steps[-1] = Step(steps[-1].formula, Justification.by("DI", 1))
    v = check_proof(Proof(p.system, p.premises, tuple(steps)))
    assert v.first_failure == (len(steps), "unknown rule DI for NeL")


def test_system_registry():
    assert get_system("NeL1").model_classes() == {"Nw", "di", "trans1"}
    assert get_system("NeLas+").model_classes() == {"Nw", "N", "di"}
    assert get_system("NeL1").extends(get_system("NL"))
    assert not get_system("NL").extends(get_system("NeL"))
    with pytest.raises(UnknownSystem):
        get_system("NoSuch")
    assert {n for n, s in SYSTEMS.items() if s.known_trivial} == {"NL+S", "NL+D", "NL++Id1"}


@pytest.mark.parametrize("name", sorted(PROOFS))
def test_proof_json_roundtrip(name):
    p = PROOFS[name]
    q = proof_from_dict(json.loads(json.dumps(proof_to_dict(p))))
    assert q.steps == p.steps and q.premises == p.premises and q.system == p.system
    assert check_proof(q)
