import pytest
from hypothesis import given, strategies as st

from connexive.formula import (
    Circ, ParseError, PathError, Star, Tensor, Var, eqv, imp, left_chain, match_eqv, match_imp,
    match_oplus, neq, neq3, oplus, hook, parse, positions, render, replace_at, size, substitute,
    subterm_at, variables_of,
)
from strategies import formulas, variables

p, q, r = Var("p"), Var("q"), Var("r")


def test_implication_is_primitive_composite():
    assert parse("p => q") == Star(Circ(p, Star(q)))


def test_derived_connectives_expand():
    assert parse("p <=> q") == Tensor(imp(p, q), imp(q, p))
    assert parse("p =/= q") == Star(eqv(p, q))
    assert parse("p (+) q") == Star(Tensor(Star(p), Star(q)))
    assert parse("p -> q") == oplus(Star(p), q) == hook(p, q)


def test_unicode_and_ascii_agree():
    assert parse("(p ⊗ q) ⇒ (p ∘ q)") == parse("(p & q) => (p o q)")
    assert parse("p ⇎ q") == parse("p =/= q")
    assert parse("p ⊕ q*") == parse("p (+) q*")


def test_ternary_neq_is_left_associated():
    f = parse("p =/= q =/= r")
    assert f == neq3(p, q, r)
    assert f == Tensor(Tensor(neq(p, q), neq(p, r)), neq(q, r))


def test_postfix_star_stacks():
    assert parse("p**") == Star(Star(p))
    assert parse("(p & q)*") == Star(Tensor(p, q))


def test_o_is_variable_in_operand_position():
    assert parse("o o o") == Circ(Var("o"), Var("o"))


@pytest.mark.parametrize("text, offset", [
    ("p => (", 6),
    ("(p & q", 0),
    ("p & q & r", 6),
    ("p $ q", 2),
    ("p)", 1),
    ("ψ => #", 6),  # ψ is two bytes in UTF-8
])
def test_parse_errors_report_byte_offsets(text, offset):
    with pytest.raises(ParseError) as e:
        parse(text)
    assert e.value.offset == offset


def test_matchers():
    assert match_imp(parse("p => q")) == (p, q)
    assert match_imp(parse("p & q")) is None
    assert match_eqv(parse("p <=> q*")) == (p, Star(q))
    assert match_eqv(parse("(p => q) & (p => r)")) is None
    assert match_oplus(parse("p (+) q")) == (p, q)


@given(formulas)
def test_render_parse_roundtrip(f):
    assert parse(render(f, "primitive")) == f
    assert parse(render(f, "sugared")) == f


@given(formulas)
def test_sugared_never_longer(f):
    assert len(render(f, "sugared")) <= len(render(f, "primitive")) + 2


@given(formulas, formulas)
def test_substitution_composes(f, g):
    s1 = {"p": g}
    s2 = {"q": Star(Var("r"))}
    once = substitute(substitute(f, s1), s2)
    combined = {"p": substitute(g, s2), **{k: v for k, v in s2.items() if k != "p"}}
    assert once == substitute(f, combined)


@given(formulas)
def test_identity_substitution(f):
    assert substitute(f, {v: Var(v) for v in variables_of(f)}) == f


@given(formulas, formulas)
def test_substitution_variables(f, g):
    h = substitute(f, {"p": g})
    expect = {v for v in variables_of(f) if v != "p"}
    if "p" in variables_of(f):
        expect |= set(variables_of(g))
    assert set(variables_of(h)) == expect


@given(formulas)
def test_positions_address_subterms(f):
    ps = list(positions(f))
    assert len(ps) == size(f)
    for path, sub in ps:
        assert subterm_at(f, path) == sub


@given(formulas, st.data())
def test_replace_at_single_path(f, data):
    path, old = data.draw(st.sampled_from(list(positions(f))))
    new = Var("z")
    g = replace_at(f, [path], new)
    assert subterm_at(g, path) == new
    assert replace_at(g, [path], old) == f


def test_replace_at_rejects_overlap_and_bad_paths():
    f = parse("(p & q) o p")
    with pytest.raises(PathError):
        replace_at(f, [(0,), (0, 0)], r)
    with pytest.raises(PathError):
        replace_at(f, [(2,)], r)
    with pytest.raises(PathError):
        replace_at(f, [(0,), (1,)], r)  # different subformulas at the two paths


def test_replace_at_parallel_occurrences():
    f = parse("(p & q) o (p & q)")
    g = replace_at(f, [(0,), (1,)], r)
    assert g == Circ(r, r)


def test_left_chain():
    assert left_chain([p, q, r]) == Tensor(Tensor(p, q), r)
    assert left_chain([p]) == p


@given(variables)
def test_double_star_is_not_identity_syntactically(v):
    assert Star(Star(v)) != v


def test_schemas_render_and_parse_back():
    from connexive.calculus import AXIOMS
    for f in AXIOMS.values():
        assert parse(render(f, "sugared")) == f
