"""Embedded reference structures: example models, the induced poset of M2,
named derivations and a handful of hand-computed values."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

from .model import FALSE, TRUE, FiniteNModel

__all__ = ["CorpusEntry", "corpus", "lookup", "models", "MODEL_IDS", "M2_POSET_COVERS"]

_T, _F = TRUE, FALSE


def _perp(spec: str):
    """'a/@f a/@t a/b ...' -> list of pairs."""
    return [tuple(tok.split("/")) for tok in spec.split()]


_M1 = dict(
    carrier="a b c d e f".split(),
    circ=["a e e a e a",
          "e a e a e a",
          "e e e a e e",
          "a a a a a a",
          "e e e a c a",
          "a a e a a a"],
    tensor=["c b c d c b",
            "b d b d b d",
            "c b c d c b",
            "d d d d d d",
            "c b c d c b",
            "b d b d b d"],
    star="a b d c f e",
    incompat=_perp("a/@f c/@f e/@f a/@t d/@t f/@t "
                   "a/a a/d a/f b/b b/d b/f c/d d/a d/b d/c d/e d/f "
                   "e/d e/f f/a f/b f/d f/e f/f"
                   # d/d is forced by (c), since d∘d = a and a ⊥ 𝗍
                   " d/d"),
)

_M2 = dict(
    carrier="a b c d e f".split(),
    circ=["a b c a c a",
          "b a a b a b",
          "c a a b a c",
          "a b b a b a",
          "c a a b a b",
          "a b c a b a"],
    tensor=["c d a b f e",
            "d b b d b d",
            "a b c d e f",
            "b d d b d b",
            "f b e d b d",
            "e d f b d b"],
    star="b a d c f e",
    incompat=_perp("a/@f c/@f b/@t d/@t "
                   "a/b b/a b/d b/f c/d d/b d/c d/e e/d e/f f/b f/e"),
)

_M3 = dict(
    carrier="a b c d e f".split(),
    circ=["a a c d d a",
          "a a c c d a",
          "c c a a a c",
          "d c a a a c",
          "d d a a a c",
          "a a c c c a"],
    tensor=["e d f b a c",
            "d c f f b c",
            "f f c c c f",
            "b f c c d f",
            "a b c d e f",
            "c c f f f c"],
    star="c d a b f e",
    incompat=_perp("a/@f e/@f c/@t f/@t "
                   "a/c b/c b/d c/a c/b c/f d/b d/f e/f f/c f/d f/e"),
)

_M4 = dict(
    carrier="a b c d".split(),
    circ=["b a a b",
          "a b b c",
          "a b b a",
          "b c a b"],
    tensor=["a c c a",
            "c d a b",
            "c a a c",
            "a b c d"],
    star="b a d c",
    incompat=_perp("b/@f d/@f a/@t c/@t a/b a/c c/a b/a c/d d/c"),
)

# M4 with b∘d = d∘b = d: the only single-cell change of the M4
# tables that yields a model under the M4 relation ⊥.
_M4R = dict(_M4, circ=["b a a b",
                       "a b b d",
                       "a b b a",
                       "b d a b"])

_M5 = dict(
    carrier="a b c d".split(),
    circ=["c d c d",
          "d c b c",
          "c b c d",
          "d c d c"],
    tensor=["d a d a",
            "a b c d",
            "d c b a",
            "a d a d"],
    star="b a d c",
    incompat=_perp("b/@f d/@t a/@t c/@f a/b a/d d/a b/a c/d d/c"),
)

_T1 = dict(
    carrier=["a"], circ=["a"], tensor=["a"], star="a",
    incompat=[("a", "a"), ("a", _T), ("a", _F)],
)

# name -> (data, declared classes, anchor)
_MODEL_DATA = {
    "M1": (_M1, ("Nw", "N"), "six-element associative example model"),
    "M2": (_M2, ("Nw", "di", "trans1", "s"), "six-element model with (di), used for the induced poset"),
    "M3": (_M3, ("Nw", "trans1"), "six-element irregular model with transitive order"),
    "M4": (_M4, ("Nw", "trans1"), "four-element counterexample for modus ponens inside ⊥"),
    "M4r": (_M4R, ("Nw", "trans1"), "repaired variant of M4"),
    "M5": (_M5, ("Nw", "trans1"), "four-element counterexample for disjunctive syllogism inside ⊥"),
    "T1": (_T1, ("Nw", "N", "trivial"), "one-element model"),
}

MODEL_IDS = tuple(_MODEL_DATA)

# Hasse covers of the induced order on M2: two chains linked by *.
M2_POSET_COVERS = (("d", "f"), ("f", "a"), ("b", "e"), ("e", "c"))


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    kind: str  # model | poset | proof | computed-value
    payload: Any
    anchor: str = ""
    tags: tuple[str, ...] = field(default=())


def _build_model(name: str) -> FiniteNModel:
    data, declared, _ = _MODEL_DATA[name]
    return FiniteNModel.from_names(
        name, data["carrier"], data["tensor"], data["circ"], data["star"],
        data["incompat"], declared,
    )


@lru_cache(maxsize=None)
def models() -> dict[str, FiniteNModel]:
    return {name: _build_model(name) for name in _MODEL_DATA}


# Hand-computed reference values; each is re-derived by the regression.
#   kind "eval": evaluate formula under assignment, expect value and membership in F.
#   kind "perp": check x ⊥ y for the given carrier pair (y may be a formula value).
COMPUTED_VALUES = (
    {"id": "M2-explosion", "model": "M2", "kind": "eval",
     "formula": "(p => (p* => p))", "assign": {"p": "a"}, "value": "b", "designated": False},
    {"id": "M2-transitivity", "model": "M2", "kind": "eval",
     "formula": "(((p => q) & (q => r)) => (p => r))",
     "assign": {"p": "a", "q": "a", "r": "a"}, "value": "b", "designated": False},
    {"id": "M2-idempotent-step", "model": "M2", "kind": "eval",
     "formula": "(((p => p) & (p => p)) => (p => p))",
     "assign": {"p": "a"}, "value": "b", "designated": False},
    {"id": "M3-irregular", "model": "M3", "kind": "eval",
     "formula": "(p =/= q)", "assign": {"p": "a", "q": "b"}, "value": "b", "designated": False,
     "steps": {"(p => q)": "b", "(q => p)": "a", "((p => q) & (q => p))": "d"}},
    {"id": "M4-mp-failure", "model": "M4", "kind": "perp",
     "left": "a", "right": {"formula": "(p => q)*", "assign": {"p": "a", "q": "b"}},
     "right_value": "b", "expect": True,
     "contrast": {"left": "a", "right": "a", "expect": False}},
    {"id": "M5-ds-failure", "model": "M5", "kind": "perp",
     "left": "a", "right": {"formula": "(p* (+) q)*", "assign": {"p": "a", "q": "b"}},
     "right_value": "d", "expect": True,
     "contrast": {"left": "a", "right": "a", "expect": False}},
)


@lru_cache(maxsize=None)
def corpus() -> tuple[CorpusEntry, ...]:
    from .calculus import corpus_proofs

    out = []
    for name, m in models().items():
        out.append(CorpusEntry(name, "model", m, _MODEL_DATA[name][2], tuple(sorted(m.declared_classes))))
    out.append(CorpusEntry("m2-poset", "poset", {"model": "M2", "covers": M2_POSET_COVERS},
                           "induced order on M2"))
    for proof in corpus_proofs():
        out.append(CorpusEntry(proof.name, "proof", proof, proof.note))
    for cv in COMPUTED_VALUES:
        out.append(CorpusEntry(cv["id"], "computed-value", cv, cv["model"]))
    return tuple(out)


def lookup(entry_id: str) -> CorpusEntry:
    if entry_id in _MODEL_DATA:
        return CorpusEntry(entry_id, "model", models()[entry_id], _MODEL_DATA[entry_id][2])
    for e in corpus():
        if e.id == entry_id:
            return e
    raise KeyError(entry_id)
