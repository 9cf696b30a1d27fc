import itertools

import pytest

from connexive.corpus import M2_POSET_COVERS, models
from connexive.order import (
    ClosureInapplicable, OrderError, PAIPoset, bounds, closed_set_lattice, dm_completion,
    dm_embedding_failures, embedding_check, lattice_from_covers, nogo_checks, ortho_checks,
    orthoisomorphism, orthomodularity_witness_from_model, perp_closure, perp_set,
    poset_from_model, poset_from_relation, residuation_check,
)

MS = models()
BATTERY = ["M2", "M3", "M4", "M4r", "M5"]


def ref_poset():
    m = MS["M2"]
    return poset_from_relation(m.carrier, M2_POSET_COVERS, [m.carrier[s] for s in m.algebra.star])


def test_m2_poset_is_reference_poset():
    p = poset_from_model(MS["M2"])
    assert p == ref_poset()
    assert sorted(p.covers()) == sorted(M2_POSET_COVERS)
    assert p.violations() == []


def test_poset_from_model_rejects_reflexive_order_failures():
    with pytest.raises(OrderError):
        poset_from_model(MS["T1"].__class__(MS["M2"].algebra, MS["M1"].perp))


@pytest.mark.parametrize("name", BATTERY)
def test_closed_sets_and_dm_agree(name):
    m = MS[name]
    p = poset_from_model(m)
    cl, dm = closed_set_lattice(m), dm_completion(p)
    assert cl.size == dm.size
    iso = orthoisomorphism(cl, dm)
    assert iso is not None
    for i, j in itertools.product(range(cl.size), repeat=2):
        assert cl.leq[i][j] == dm.leq[iso[i]][iso[j]]
    assert all(dm.inv[iso[i]] == iso[cl.inv[i]] for i in range(cl.size))
    assert dm_embedding_failures(p, dm) == []


@pytest.mark.parametrize("name", BATTERY)
def test_ortholattice_not_orthomodular(name):
    rep = ortho_checks(closed_set_lattice(MS[name]))
    assert rep.lattice and rep.ortholattice
    assert not rep.orthomodular and "orthomodular" in rep.witnesses
    assert not rep.boolean


@pytest.mark.parametrize("name", BATTERY)
def test_residuation_nogo_embedding(name):
    m = MS[name]
    assert residuation_check(m)
    assert nogo_checks(poset_from_model(m))
    assert embedding_check(m)


@pytest.mark.parametrize("name", BATTERY)
def test_closure_of_point_is_perp_of_star(name):
    m = MS[name]
    s = m.algebra.star
    for x in range(m.size):
        assert perp_closure(m, [x]) == perp_set(m, [s[x]])


def test_orthomodularity_witness_from_model():
    (pair, X, Y) = orthomodularity_witness_from_model(MS["M2"])
    m = MS["M2"]
    assert X < Y and not (perp_set(m, X) & Y)
    assert orthomodularity_witness_from_model(MS["M4"]) is None


def test_closure_inapplicable_on_reflexive_perp():
    for name in ("M1", "T1"):
        with pytest.raises(ClosureInapplicable):
            closed_set_lattice(MS[name])


def benzene():
    labels = ["0", "a", "b", "a'", "b'", "1"]
    covers = [("0", "a"), ("a", "b"), ("b", "1"), ("0", "b'"), ("b'", "a'"), ("a'", "1")]
    inv = {"0": "1", "1": "0", "a": "a'", "a'": "a", "b": "b'", "b'": "b"}
    return lattice_from_covers(labels, covers, inv)


def test_benzene_is_the_standard_non_orthomodular_ortholattice():
    rep = ortho_checks(benzene())
    assert rep.ortholattice and not rep.orthomodular and not rep.boolean


def test_boolean_square():
    l = lattice_from_covers(["0", "x", "y", "1"], [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")],
                            {"0": "1", "1": "0", "x": "y", "y": "x"})
    rep = ortho_checks(l)
    assert rep.ortholattice and rep.orthomodular and rep.boolean


def test_non_complemented_involution_is_not_ortho():
    l = lattice_from_covers(["0", "m", "1"], [("0", "m"), ("m", "1")], {"0": "1", "1": "0", "m": "m"})
    rep = ortho_checks(l)
    assert rep.lattice and not rep.ortholattice


def test_dm_of_two_antichain_has_four_elements():
    p = poset_from_relation(["x", "y"], [], ["y", "x"])
    dm = dm_completion(p)
    assert dm.size == 4
    assert ortho_checks(dm).boolean


def test_dm_of_chain_is_the_chain():
    p = poset_from_relation(["u", "v", "w"], [("u", "v"), ("v", "w")], ["w", "v", "u"])
    dm = dm_completion(p)
    assert dm.size == 3 and dm.embedding == (0, 1, 2)


def test_orthoisomorphism_rejects_different_lattices():
    sq = lattice_from_covers(["0", "x", "y", "1"], [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")],
                             {"0": "1", "1": "0", "x": "y", "y": "x"})
    assert orthoisomorphism(benzene(), sq) is None
    assert orthoisomorphism(benzene(), benzene()) is not None


def test_nogo_negative_control():
    # x ≤ y with z ≤ x* and z ≤ y violates the first property
    p = poset_from_relation(["x", "y", "z", "x'", "y'", "z'"],
                            [("x", "y"), ("y'", "x'"), ("z", "x'"), ("x", "z'"), ("z", "y"), ("y'", "z'")],
                            ["x'", "y'", "z'", "x", "y", "z"])
    rep = nogo_checks(p)
    assert not rep.ok and rep.witness[0] == "first"


def test_nogo_vacuous_on_one_point():
    p = PAIPoset(("a",), ((True,),), (0,))
    assert nogo_checks(p).note.startswith("vacuous")


def test_bounds():
    p = ref_poset()
    low, up = bounds(p, ["f"])
    names = p.elements
    assert {names[i] for i in low} == {"d", "f"} and {names[i] for i in up} == {"f", "a"}


def test_dot_output():
    assert ref_poset().to_dot().startswith("digraph poset")
    assert "digraph lattice" in closed_set_lattice(MS["M2"]).to_dot()
