"""Hermetic regression battery over the embedded corpus.

Each check is a numbered criterion with a wall-clock bound; ``run_all``
returns one ``CriterionResult`` per criterion in a fixed order, and the
verdicts depend only on the corpus (timings aside).
"""

from __future__ import annotations

import fnmatch
import itertools
import time
from dataclasses import dataclass, field, replace
from typing import Callable

from .calculus import (
    AXIOMS, SYSTEMS, THEOREM, Justification, Proof, Step, check_proof, corpus_proofs, get_system,
)
from .corpus import COMPUTED_VALUES, M2_POSET_COVERS, models
from .formula import Star, Var, parse, substitute
from .matrix import (
    Matrix, PreconditionViolation, leibniz, leibniz_refine, leibniz_via_arrows, matrix_of,
    roundtrip_check, set_partitions,
)
from .model import (
    RULE_CONDITIONS, FiniteNModel, check_horn, class_check, consequence, evaluate, holds, validate_algebra,
    validate_nmodel,
)
from .order import (
    ClosureInapplicable, OrderError, closed_set_lattice, dm_completion, embedding_check,
    nogo_checks, ortho_checks, orthoisomorphism, poset_from_model, poset_from_relation,
    residuation_check,
)
from .search import SearchSpec, canonical_form, enumerate_models, find_countermodel, seed_from_model

__all__ = ["CriterionResult", "CRITERIA", "run_all", "proof_mutations",
           "CENSUS_SIZE2_LABELLED", "CENSUS_SIZE2_ISO", "A9_COUNTERMODEL_CANONICAL_OF"]

# Size-2 census, fixed from the brute-force filter over all raw structures.
CENSUS_SIZE2_LABELLED = 0
CENSUS_SIZE2_ISO = 0
# The first countermodel to A9 is isomorphic to this corpus model.
A9_COUNTERMODEL_CANONICAL_OF = "M5"

A9 = substitute(AXIOMS["A9"], {"φ": Var("p"), "ψ": Var("q")})
TRANSITIVITY = parse("((p => q) & (q => r)) => (p => r)")


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    elapsed: float
    limit: float
    checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def in_time(self) -> bool:
        return self.elapsed <= self.limit

    @property
    def passed(self) -> bool:
        return self.ok and self.in_time

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (f"[{tag}] criterion {self.number}: {self.title} "
                f"({self.checks} checks, {self.elapsed:.2f}s / {self.limit:g}s)")

    def as_dict(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "checks": self.checks, "failures": list(self.failures),
                "elapsed": round(self.elapsed, 4), "limit": self.limit}


class _Tally:
    def __init__(self):
        self.checks = 0
        self.failures: list[str] = []

    def expect(self, cond, label: str):
        self.checks += 1
        if not cond:
            self.failures.append(label)
        return bool(cond)


# -- 1 ---------------------------------------------------------------------------

def corpus_validation(t: _Tally):
    ms = models()
    m1 = ms["M1"]
    t.expect(validate_nmodel(m1).ok, f"M1 not an 𝔑w-model: {validate_nmodel(m1).violations[:1]}")
    t.expect(validate_algebra(m1.algebra, require_assoc=True).ok, "M1 ⊗ not associative")
    m2 = ms["M2"]
    t.expect(validate_nmodel(m2).ok, "M2 not an 𝔑w-model")
    for tag in ("di", "trans1", "s"):
        t.expect(class_check(m2, tag), f"M2 not in class {tag}")
    m3 = ms["M3"]
    t.expect(validate_nmodel(m3).ok and class_check(m3, "trans1"), "M3 not 𝔑w¹")
    t.expect(not class_check(m3, "regular"), "M3 unexpectedly regular")
    for name in ("M4", "M5"):
        rep = validate_nmodel(ms[name])
        t.expect(rep.ok, f"{name} not an 𝔑w-model: {', '.join(map(str, rep.violations[:3]))}")
        t.expect(class_check(ms[name], "trans1"), f"{name} not in trans1")
    t.expect(validate_nmodel(ms["T1"]).ok, "T1 not an 𝔑w-model")


# -- 2 ---------------------------------------------------------------------------

def computed_values(t: _Tally):
    ms = models()
    for cv in COMPUTED_VALUES:
        m = ms[cv["model"]]
        F = m.perp.to_false
        if cv["kind"] == "eval":
            got = evaluate(m, cv["formula"], cv["assign"])
            t.expect(got == cv["value"], f"{cv['id']}: value {got}, expected {cv['value']}")
            t.expect((m.algebra.index(got) in F) == cv["designated"], f"{cv['id']}: designation")
            for sub, val in cv.get("steps", {}).items():
                g = evaluate(m, sub, cv["assign"])
                t.expect(g == val, f"{cv['id']}: {sub} = {g}, expected {val}")
        else:
            a = m.algebra
            r = cv["right"]
            rv = evaluate(m, r["formula"], r["assign"])
            t.expect(rv == cv["right_value"], f"{cv['id']}: right side {rv}")
            x, y = a.index(cv["left"]), a.index(rv)
            t.expect(m.perp.perp(x, y) == cv["expect"], f"{cv['id']}: {cv['left']}⊥{rv}")
            c = cv["contrast"]
            t.expect(m.perp.perp(a.index(c["left"]), a.index(c["right"])) == c["expect"],
                     f"{cv['id']}: contrast {c['left']}⊥{c['right']}")


# -- 3 ---------------------------------------------------------------------------

def proof_mutations(proof: Proof) -> list[tuple[str, Proof, int]]:
    """Deterministic corruptions of a correct proof with the line that must fail first."""
    out = []
    steps = list(proof.steps)
    k = len(steps) // 2 + 1
    bad = list(steps)
    bad[k - 1] = Step(Star(steps[k - 1].formula), steps[k - 1].just)
    out.append(("altered line", replace(proof, steps=tuple(bad)), k))
    sysm = get_system(proof.system)
    rule_lines = [i for i, s in enumerate(steps, 1) if s.just.kind == "rule"]
    if rule_lines:
        i = rule_lines[-1]
        j = steps[i - 1].just
        others = sorted(r for r in sysm.rules if r != j.rule)
        swap = "Adj" if "Adj" in others and j.rule != "Adj" else others[0]
        bad = list(steps)
        bad[i - 1] = Step(steps[i - 1].formula, replace(j, rule=swap))
        out.append(("wrong rule", replace(proof, steps=tuple(bad)), i))
    if sysm.mode == THEOREM:
        extra = Step(Var("p"), Justification.premise(0))
        shifted = [extra] + [
            Step(s.formula, replace(s.just, sources=tuple(x + 1 for x in s.just.sources)))
            for s in steps]
        out.append(("premise in theorem mode", replace(proof, steps=tuple(shifted)), 1))
    return out


def proof_checker(t: _Tally):
    for p in corpus_proofs():
        v = check_proof(p)
        t.expect(v.ok, f"{p.name}: rejected at {v.first_failure}")
        for label, mutant, line in proof_mutations(p):
            mv = check_proof(mutant)
            got = mv.first_failure[0] if mv.first_failure else None
            t.expect(not mv.ok and got == line,
                     f"{p.name}/{label}: expected failure at line {line}, got {mv.first_failure}")


# -- 4 ---------------------------------------------------------------------------

def _in_classes(m: FiniteNModel, tags) -> bool:
    return all(class_check(m, tag) for tag in tags)


def _rule_violation(m: FiniteNModel, rule: str):
    a, F = m.algebra, m.perp.to_false
    n = a.size
    if rule == "MP":
        for x, y in itertools.product(range(n), repeat=2):
            if x in F and a.imp(x, y) in F and y not in F:
                return (x, y)
    elif rule in ("Adj", "CE"):
        for x, y in itertools.product(range(n), repeat=2):
            if rule == "Adj" and x in F and y in F and a.tensor[x][y] not in F:
                return (x, y)
            if rule == "CE" and a.tensor[x][y] in F and x not in F:
                return (x, y)
    elif rule in RULE_CONDITIONS:
        out = check_horn(m, RULE_CONDITIONS[rule])
        return None if out.ok else out.witness
    return None


def soundness(t: _Tally):
    ms = models()
    for sysm in SYSTEMS.values():
        if sysm.known_trivial:
            continue
        tags = sysm.model_classes()
        for name, m in ms.items():
            if not _in_classes(m, tags):
                continue
            for ax in sorted(sysm.axioms):
                out = holds(m, AXIOMS[ax])
                t.expect(out.ok, f"{sysm.name}: {ax} fails in {name} at {out.witness}")
            if sysm.mode != THEOREM:
                for rule in sorted(sysm.rules):
                    w = _rule_violation(m, rule)
                    t.expect(w is None, f"{sysm.name}: rule {rule} unsound in {name} at {w}")
    for p in corpus_proofs():
        sysm = get_system(p.system)
        if sysm.known_trivial:
            continue
        tags = sysm.model_classes()
        for name, m in ms.items():
            if not _in_classes(m, tags):
                continue
            out = consequence(m, p.premises, p.conclusion)
            t.expect(out.ok, f"proof {p.name}: conclusion fails in {name} at {out.witness}")


# -- 5 ---------------------------------------------------------------------------

def triviality(t: _Tally):
    ms = models()
    paradox = parse("(p o q) => (p => q)")
    symm = parse("(p => q) => (q => p)")
    idem = parse("(p & p) o (q & q)")
    for name, m in ms.items():
        if m.size > 1:
            t.expect(not holds(m, paradox).ok, f"{name} validates (p∘q)⇒(p⇒q)")
            t.expect(not holds(m, symm).ok, f"{name} validates (p⇒q)⇒(q⇒p)")
        if class_check(m, "N"):
            out = holds(m, idem)
            t.expect(out.ok, f"{name}: (p⊗p)∘(q⊗q) fails at {out.witness}")
        if class_check(m, "di"):
            out = check_horn(m, RULE_CONDITIONS["ECQ"])
            t.expect(out.ok, f"{name}: di model violates ECQ at {out.witness}")


# -- 6 ---------------------------------------------------------------------------

def _bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def matrix_bridge(t: _Tally):
    ms = models()
    for name, m in ms.items():
        mat = matrix_of(m)
        brute, refined = leibniz(mat), leibniz_refine(mat)
        t.expect(brute == refined, f"{name}: partition and refinement Leibniz differ")
        t.expect(brute.is_identity(), f"{name}: Leibniz congruence not the identity")
        try:
            arrows = leibniz_via_arrows(mat)
            t.expect(arrows == brute, f"{name}: arrow relation differs from Leibniz")
        except PreconditionViolation as e:
            t.expect(False, f"{name}: arrow relation unusable ({e})")
        rep = roundtrip_check(m)
        t.expect(rep.filter_roundtrip, f"{name}: filter round trip changes F")
        t.expect(rep.perp_roundtrip, f"{name}: ⊥ round trip changes ⊥")
    t.expect(sum(1 for _ in set_partitions(6)) == _bell(6) == 203, "partition count at 6")
    a = ms["M2"].algebra
    for k in range(a.size + 1):
        for g in itertools.combinations(range(a.size), k):
            mat = Matrix(a, frozenset(g))
            t.expect(leibniz(mat) == leibniz_refine(mat), f"M2 filter {g}: Leibniz oracles differ")


# -- 7 ---------------------------------------------------------------------------

def _order_battery(t: _Tally, name: str, m: FiniteNModel):
    try:
        p = poset_from_model(m)
    except OrderError as e:
        t.expect(False, f"{name}: {e}")
        return
    try:
        cl = closed_set_lattice(m)
    except ClosureInapplicable as e:
        t.expect(False, f"{name}: {e}")
        return
    dm = dm_completion(p)
    t.expect(orthoisomorphism(cl, dm) is not None, f"{name}: closed sets and DM not orthoisomorphic")
    rep = ortho_checks(cl)
    t.expect(rep.ortholattice, f"{name}: not an ortholattice {rep.witnesses}")
    t.expect(not rep.orthomodular and "orthomodular" in rep.witnesses,
             f"{name}: orthomodular or missing witness")
    t.expect(not rep.boolean, f"{name}: Boolean")
    r = residuation_check(m)
    t.expect(r.ok, f"{name}: residuation fails at {r.witness}")
    ng = nogo_checks(p)
    t.expect(ng.ok, f"{name}: no-go fails at {ng.witness}")
    e = embedding_check(m)
    t.expect(e.ok, f"{name}: {{x}}^⊥⊥ vs {{x*}}^⊥ fails at {e.witness}")


def order_suite(t: _Tally):
    ms = models()
    m2 = ms["M2"]
    star_names = [m2.carrier[s] for s in m2.algebra.star]
    ref = poset_from_relation(m2.carrier, M2_POSET_COVERS, star_names)
    try:
        t.expect(poset_from_model(m2) == ref, "poset(M2) differs from the reference poset")
    except OrderError as e:
        t.expect(False, f"M2: {e}")
    for name in ("M2", "M3", "M4", "M5"):
        _order_battery(t, name, ms[name])


# -- 8 ---------------------------------------------------------------------------

def search_suite(t: _Tally):
    ms = models()
    r1 = enumerate_models(SearchSpec(1))
    t.expect(len(r1.models) == 1 and r1.exhausted, "size 1 is not a single model")
    if r1.models:
        t.expect(canonical_form(r1.models[0]) == canonical_form(ms["T1"]), "size 1 model is not trivial")
    r2 = enumerate_models(SearchSpec(2, iso=False))
    t.expect(r2.exhausted and len(r2.models) == CENSUS_SIZE2_LABELLED,
             f"labelled size-2 census {len(r2.models)} != {CENSUS_SIZE2_LABELLED}")
    r2i = enumerate_models(SearchSpec(2))
    t.expect(len(r2i.models) == CENSUS_SIZE2_ISO, "size-2 isomorphism classes")
    for label, target in (("A9", A9), ("transitivity", TRANSITIVITY)):
        c = find_countermodel(SearchSpec(6, target=target, time_limit=60))
        t.expect(c.found and c.size <= 6, f"no countermodel for {label} up to size 6")
        if c.found:
            t.expect(not holds(c.model, target).ok and validate_nmodel(c.model).ok,
                     f"{label}: countermodel does not refute the target")
            if label == "A9":
                t.expect(canonical_form(c.model) == canonical_form(ms[A9_COUNTERMODEL_CANONICAL_OF]),
                         "A9 countermodel changed")
    c = find_countermodel(SearchSpec(3, target=parse("p => p"), time_limit=60))
    t.expect(not c.found and c.exhausted_sizes == (1, 2, 3), "p⇒p search did not exhaust sizes ≤3")
    t.expect(c.elapsed < 60, f"size ≤3 exhaustion took {c.elapsed:.1f}s")
    m1 = ms["M1"]
    seeded = enumerate_models(SearchSpec(6, seed=seed_from_model(m1, ("star", "circ")), iso=False,
                                         time_limit=60))
    t.expect(seeded.elapsed < 60, f"seeded size-6 search took {seeded.elapsed:.1f}s")
    t.expect(seeded.exhausted and any(
        x.algebra.tensor == m1.algebra.tensor and x.perp == m1.perp for x in seeded.models),
        "seeded size-6 search misses the M1 completion")


# -- driver ----------------------------------------------------------------------

CRITERIA: tuple[tuple[int, str, float, Callable[[_Tally], None]], ...] = (
    (1, "corpus validation", 1.0, corpus_validation),
    (2, "computed values", 1.0, computed_values),
    (3, "proof checker and mutations", 1.0, proof_checker),
    (4, "soundness on corpus models", 5.0, soundness),
    (5, "triviality and no-go formulas", 5.0, triviality),
    (6, "matrix bridge", 5.0, matrix_bridge),
    (7, "order suite", 10.0, order_suite),
    (8, "model search", 60.0, search_suite),
)


def run_one(number: int) -> CriterionResult:
    for num, title, limit, fn in CRITERIA:
        if num == number:
            t = _Tally()
            t0 = time.perf_counter()
            try:
                fn(t)
            except Exception as e:  # a crash is a failure, not an abort of the battery
                t.failures.append(f"crashed: {type(e).__name__}: {e}")
            el = time.perf_counter() - t0
            return CriterionResult(num, title, not t.failures, el, limit, t.checks, t.failures)
    raise KeyError(number)


def run_all(pattern: str | None = None) -> list[CriterionResult]:
    out = []
    for num, title, _, _ in CRITERIA:
        if pattern and not (fnmatch.fnmatch(str(num), pattern) or fnmatch.fnmatch(title, pattern)
                            or pattern.lower() in title.lower()):
            continue
        out.append(run_one(num))
    return out
