"""Hilbert-style proofs for Nelson's calculi and their extensions.

Schemas are stored as formulas over the metavariables φ, ψ, χ and are
matched first-order against fully expanded primitive formulas.  Proof
lines are numbered from 1; premise indices count from 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .formula import (
    Circ, Formula, PathError, Star, Tensor, Var, eqv, imp, match_eqv, match_imp,
    match_oplus, neq3, oplus, parse, render, replace_at, subterm_at, substitute,
)

__all__ = [
    "AXIOMS", "RULES", "SYSTEMS", "SystemSpec", "Justification", "Step", "Proof",
    "Verdict", "UnknownSystem", "ProofFormatError", "match_axiom", "check_step",
    "check_proof", "get_system", "proof_from_dict", "proof_to_dict", "load_proof",
    "corpus_proofs",
]

P, Q, R = Var("φ"), Var("ψ"), Var("χ")
METAVARS = frozenset({"φ", "ψ", "χ"})

AXIOMS: dict[str, Formula] = {
    "A1": imp(P, P),
    "A2": imp(Circ(P, Q), Circ(Q, P)),
    "A3": imp(P, Star(Star(P))),
    "A4": imp(imp(P, Q), Circ(P, Q)),
    "A5": eqv(Tensor(P, Q), Tensor(Q, P)),
    "A5*": imp(Tensor(P, Q), Tensor(Q, P)),
    "A6": imp(imp(Tensor(P, Q), R), imp(Tensor(P, Star(R)), Star(Q))),
    "A7": imp(neq3(P, Q, R), imp(imp(P, Q), imp(imp(Q, R), imp(P, R)))),
    "AS1": imp(Tensor(Tensor(P, Q), R), Tensor(P, Tensor(Q, R))),
    "AS2": imp(Tensor(P, Tensor(Q, R)), Tensor(Tensor(P, Q), R)),
    "S": imp(Tensor(P, Q), P),
    "Id1": imp(Tensor(P, P), P),
    "Id2": imp(P, Tensor(P, P)),
    "A9": imp(Tensor(P, Q), Circ(P, Q)),
    "A9*": imp(Tensor(P, imp(P, Q)), Q),
    "D": imp(P, oplus(P, Q)),
}

RULES = ("MP", "Adj", "CE", "Eq1", "Eq", "DI", "I", "I2", "ECQ", "A8")
_ARITY = {"MP": 2, "Adj": 2, "CE": 1, "Eq1": 2, "Eq": 1, "DI": 1, "I": 1, "I2": 2, "ECQ": 2, "A8": 2}

THEOREM, CONSEQUENCE = "theorem", "consequence"


@dataclass(frozen=True)
class SystemSpec:
    name: str
    axioms: frozenset[str]
    rules: frozenset[str]
    mode: str
    known_trivial: bool = False
    note: str = ""

    def model_classes(self) -> frozenset[str]:
        """Class tags of the models this system is sound for."""
        tags = {"Nw"}
        if {"AS1", "AS2"} <= self.axioms:
            tags.add("N")
        for rule, tag in (("DI", "di"), ("I", "I"), ("I2", "I2"), ("ECQ", "s"), ("A8", "trans1")):
            if rule in self.rules:
                tags.add(tag)
        return frozenset(tags)

    def extends(self, other: "SystemSpec") -> bool:
        stronger_mode = self.mode == other.mode or self.mode == CONSEQUENCE
        return stronger_mode and other.axioms <= self.axioms and other.rules <= self.rules


def _registry() -> dict[str, SystemSpec]:
    base = frozenset({"A1", "A2", "A3", "A4", "A5", "A6", "A7"})
    rules = frozenset({"MP", "Adj", "CE", "Eq1"})
    assoc = frozenset({"AS1", "AS2"})
    out: dict[str, SystemSpec] = {}

    def add(name, axioms, rls, mode, trivial=False, note=""):
        out[name] = SystemSpec(name, frozenset(axioms), frozenset(rls), mode, trivial, note)

    add("NL", base, rules, THEOREM)
    add("NLas", base | assoc, rules, THEOREM)
    add("NL+", base, rules | {"DI"}, THEOREM)
    add("NLas+", base | assoc, rules | {"DI"}, THEOREM)
    add("NeL", base, rules, CONSEQUENCE)
    add("NeLas", base | assoc, rules, CONSEQUENCE)
    add("NeL+I", base, rules | {"I"}, CONSEQUENCE)
    add("NeL+I2", base, rules | {"I2"}, CONSEQUENCE)
    add("NeL^ECQ", base, rules | {"ECQ"}, CONSEQUENCE)
    add("NeL+", base, rules | {"DI"}, CONSEQUENCE)
    add("NeLas+", base | assoc, rules | {"DI"}, CONSEQUENCE)
    add("NeL1", base, rules | {"DI", "A8"}, CONSEQUENCE)
    add("NeLas1", base | assoc, rules | {"DI", "A8"}, CONSEQUENCE)
    # variants
    add("NL[A5*]", (base - {"A5"}) | {"A5*"}, rules, THEOREM,
        note="A5 replaced by its one-directional form")
    add("NL-Eq", base, {"MP", "Adj", "Eq"}, THEOREM,
        note="congruence rule Eq in place of Eq1, without CE")
    # explosive extensions, kept to run the triviality derivations
    add("NL+S", base | {"S"}, rules, THEOREM, True, "see corpus proof s-triviality")
    add("NL+D", base | {"D"}, rules, THEOREM, True, "see corpus proof d-triviality")
    add("NL++Id1", base | {"Id1"}, rules | {"DI"}, THEOREM, True, "see corpus proof id1-triviality")
    return out


SYSTEMS: dict[str, SystemSpec] = _registry()

_ALIASES = {
    "NLᵃˢ": "NLas", "NL⁺": "NL+", "NLᵃˢ⁺": "NLas+", "NeLᵃˢ": "NeLas",
    "NeL⁺": "NeL+", "NeLᵃˢ⁺": "NeLas+", "NeL¹": "NeL1", "NeLᵃˢ¹": "NeLas1",
    "NeLECQ": "NeL^ECQ", "NL⁺+Id1": "NL++Id1",
}


class UnknownSystem(KeyError):
    pass


def get_system(name: str) -> SystemSpec:
    key = _ALIASES.get(name, name)
    if key not in SYSTEMS:
        raise UnknownSystem(name)
    return SYSTEMS[key]


# -- matching --------------------------------------------------------------

def _match(template: Formula, f: Formula, sigma: dict) -> bool:
    if isinstance(template, Var) and template.name in METAVARS:
        bound = sigma.get(template.name)
        if bound is None:
            sigma[template.name] = f
            return True
        return bound == f
    if type(template) is not type(f):
        return False
    if isinstance(template, Var):
        return template == f
    if isinstance(template, Star):
        return _match(template.arg, f.arg, sigma)
    return _match(template.left, f.left, sigma) and _match(template.right, f.right, sigma)


def match_axiom(f: Formula, schema: str) -> dict[str, Formula] | None:
    """Metavariable instantiation making the schema equal to ``f``, or None."""
    sigma: dict[str, Formula] = {}
    return sigma if _match(AXIOMS[schema], f, sigma) else None


def instantiate(schema: str, **inst: Formula) -> Formula:
    """Instance of a schema; keywords are phi, psi, chi (or the Greek letters)."""
    names = {"phi": "φ", "psi": "ψ", "chi": "χ"}
    return substitute(AXIOMS[schema], {names.get(k, k): v for k, v in inst.items()})


# -- proofs ----------------------------------------------------------------

@dataclass(frozen=True)
class Justification:
    kind: str  # premise | axiom | rule
    schema: str | None = None
    index: int | None = None
    rule: str | None = None
    sources: tuple[int, ...] = ()
    paths: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def premise(cls, k: int) -> "Justification":
        return cls("premise", index=k)

    @classmethod
    def axiom(cls, schema: str) -> "Justification":
        return cls("axiom", schema=schema)

    @classmethod
    def by(cls, rule: str, *sources: int, paths=()) -> "Justification":
        return cls("rule", rule=rule, sources=tuple(sources), paths=tuple(tuple(p) for p in paths))

    def __str__(self):
        if self.kind == "premise":
            return f"premise {self.index}"
        if self.kind == "axiom":
            return self.schema or "?"
        extra = f" at {[list(p) for p in self.paths]}" if self.paths else ""
        return f"{self.rule} {', '.join(map(str, self.sources))}{extra}"


@dataclass(frozen=True)
class Step:
    formula: Formula
    just: Justification


@dataclass(frozen=True)
class Proof:
    system: str
    premises: tuple[Formula, ...]
    steps: tuple[Step, ...]
    name: str = ""
    note: str = ""

    @property
    def conclusion(self) -> Formula | None:
        return self.steps[-1].formula if self.steps else None

    def pretty(self) -> str:
        lines = [f"[{self.system}] {self.name}".rstrip()]
        for k, p in enumerate(self.premises):
            lines.append(f"  premise {k}: {render(p, 'sugared')}")
        for i, s in enumerate(self.steps, 1):
            lines.append(f"  {i:3d}. {render(s.formula, 'sugared')}    [{s.just}]")
        return "\n".join(lines)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    first_failure: tuple[int, str] | None = None

    def __bool__(self):
        return self.ok


def _check_rule(rule: str, cited: Sequence[Formula], concl: Formula, paths) -> str | None:
    if len(cited) != _ARITY[rule]:
        return f"{rule} needs {_ARITY[rule]} cited lines, got {len(cited)}"
    if rule == "MP":
        parts = match_imp(cited[0])
        if parts is None:
            return "MP: first cited line is not an implication"
        if cited[1] != parts[0]:
            return "MP: second cited line is not the antecedent"
        return None if concl == parts[1] else "MP: conclusion is not the consequent"
    if rule == "Adj":
        return None if concl == Tensor(cited[0], cited[1]) else "Adj: conclusion is not the conjunction"
    if rule == "CE":
        if not isinstance(cited[0], Tensor):
            return "CE: cited line is not a conjunction"
        return None if concl == cited[0].left else "CE: conclusion is not the left conjunct"
    if rule in ("Eq1", "Eq"):
        pair = match_eqv(cited[0])
        if pair is None:
            return f"{rule}: first cited line is not an equivalence"
        if not paths:
            return f"{rule}: no occurrence paths given"
        old, new = pair
        if rule == "Eq1":
            target, result = cited[1], concl
        else:
            both = match_eqv(concl)
            if both is None:
                return "Eq: conclusion is not an equivalence"
            target, result = both
        try:
            for p in paths:
                if subterm_at(target, p) != old:
                    return f"{rule}: path {list(p)} does not address the replaced formula"
            expected = replace_at(target, paths, new)
        except PathError as e:
            return f"{rule}: {e}"
        return None if expected == result else f"{rule}: path mismatch, replacement does not give the line"
    if rule == "DI":
        pair = match_oplus(concl)
        return None if pair is not None and pair[0] == cited[0] else "DI: conclusion is not a disjunction of the cited line"
    if rule == "I":
        pair = match_imp(cited[0])
        return None if pair is not None and pair[1] == Star(pair[0]) else "I: cited line is not of the form φ⇒φ*"
    if rule == "I2":
        a, b = match_imp(cited[0]), match_imp(cited[1])
        if a is None or b is None or a[0] != b[0] or b[1] != Star(a[1]):
            return "I2: cited lines are not φ⇒ψ and φ⇒ψ*"
        return None
    if rule == "ECQ":
        return None if cited[1] == Star(cited[0]) else "ECQ: second cited line is not the star of the first"
    if rule == "A8":
        a, b = match_imp(cited[0]), match_imp(cited[1])
        if a is None or b is None or a[1] != b[0]:
            return "A8: cited lines are not φ⇒ψ and ψ⇒χ"
        return None if concl == imp(a[0], b[1]) else "A8: conclusion is not φ⇒χ"
    return f"unknown rule {rule}"


def check_step(proof: Proof, i: int, system: SystemSpec | None = None) -> str | None:
    """None if line ``i`` (1-based) is correctly justified, else the reason."""
    sysm = system or get_system(proof.system)
    step = proof.steps[i - 1]
    j = step.just
    if j.kind == "premise":
        if sysm.mode == THEOREM:
            return "theorem-calculus forbids premises"
        if j.index is None or not 0 <= j.index < len(proof.premises):
            return f"premise index {j.index} out of range"
        return None if proof.premises[j.index] == step.formula else "line differs from the cited premise"
    if j.kind == "axiom":
        if j.schema not in AXIOMS:
            return f"unknown axiom schema {j.schema}"
        if j.schema not in sysm.axioms:
            return f"axiom {j.schema} is not in {sysm.name}"
        return None if match_axiom(step.formula, j.schema) is not None else f"not an instance of {j.schema}"
    if j.kind == "rule":
        if j.rule not in RULES or j.rule not in sysm.rules:
            return f"unknown rule {j.rule} for {sysm.name}"
        for k in j.sources:
            if not 1 <= k < i:
                return f"line {k} out of range"
        cited = [proof.steps[k - 1].formula for k in j.sources]
        return _check_rule(j.rule, cited, step.formula, j.paths)
    return f"unknown justification kind {j.kind!r}"


def check_proof(proof: Proof) -> Verdict:
    sysm = get_system(proof.system)
    if sysm.mode == THEOREM and proof.premises:
        return Verdict(False, (0, "theorem-calculus forbids premises"))
    if not proof.steps:
        return Verdict(False, (0, "empty proof"))
    for i in range(1, len(proof.steps) + 1):
        reason = check_step(proof, i, sysm)
        if reason is not None:
            return Verdict(False, (i, reason))
    return Verdict(True)


# -- JSON ------------------------------------------------------------------

class ProofFormatError(ValueError):
    pass


def _just_to_dict(j: Justification) -> dict:
    if j.kind == "premise":
        return {"kind": "premise", "index": j.index}
    if j.kind == "axiom":
        return {"kind": "axiom", "schema": j.schema}
    d = {"kind": "rule", "rule": j.rule, "from": list(j.sources)}
    if j.paths:
        d["paths"] = [list(p) for p in j.paths]
    return d


def proof_to_dict(p: Proof) -> dict:
    d = {
        "system": p.system,
        "premises": [render(f) for f in p.premises],
        "steps": [{"formula": render(s.formula), "just": _just_to_dict(s.just)} for s in p.steps],
    }
    if p.name:
        d["name"] = p.name
    return d


def proof_from_dict(d: Mapping) -> Proof:
    try:
        steps = []
        for s in d["steps"]:
            j = s["just"]
            kind = j["kind"]
            if kind == "premise":
                just = Justification.premise(int(j["index"]))
            elif kind == "axiom":
                just = Justification.axiom(j["schema"])
            elif kind == "rule":
                just = Justification.by(j["rule"], *map(int, j.get("from", [])), paths=j.get("paths", []))
            else:
                raise ProofFormatError(f"unknown justification kind {kind!r}")
            steps.append(Step(parse(s["formula"]), just))
        return Proof(d["system"], tuple(parse(f) for f in d.get("premises", [])),
                     tuple(steps), d.get("name", ""))
    except KeyError as e:
        raise ProofFormatError(f"proof file lacks field {e.args[0]!r}") from None
    except (TypeError, AttributeError) as e:
        raise ProofFormatError(f"malformed proof file: {e}") from None


def load_proof(path) -> Proof:
    with open(path, encoding="utf-8") as fh:
        return proof_from_dict(json.load(fh))


def corpus_proofs() -> list[Proof]:
    from .derivations import all_proofs

    return all_proofs()
