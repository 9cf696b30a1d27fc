"""Machine-checked derivations.

``ProofBuilder`` computes rule conclusions itself, so each derivation is
written as a sequence of rule applications; helper lemmas (double
negation, commutation of ∘) are expanded inline and cached per proof.
"""

from __future__ import annotations

from functools import lru_cache

from .calculus import Justification, Proof, Step, instantiate
from .formula import (
    Circ, Formula, Star, Tensor, Var, eqv, imp, match_eqv, match_imp, oplus,
    replace_at, subterm_at,
)

p, q, r = Var("p"), Var("q"), Var("r")


def dstar(f: Formula) -> Formula:
    return Star(Star(f))


class ProofBuilder:
    def __init__(self, system: str, premises=(), name: str = "", note: str = ""):
        self.system, self.name, self.note = system, name, note
        self.premises = tuple(premises)
        self.steps: list[Step] = []
        self._seen: dict[Formula, int] = {}

    def _add(self, f: Formula, just: Justification) -> int:
        if f in self._seen:
            return self._seen[f]
        self.steps.append(Step(f, just))
        self._seen[f] = len(self.steps)
        return len(self.steps)

    def formula(self, line: int) -> Formula:
        return self.steps[line - 1].formula

    def premise(self, k: int) -> int:
        return self._add(self.premises[k], Justification.premise(k))

    def axiom(self, schema: str, **inst) -> int:
        return self._add(instantiate(schema, **inst), Justification.axiom(schema))

    def mp(self, imp_line: int, ante_line: int) -> int:
        _, cons = match_imp(self.formula(imp_line))
        return self._add(cons, Justification.by("MP", imp_line, ante_line))

    def adj(self, a: int, b: int) -> int:
        return self._add(Tensor(self.formula(a), self.formula(b)), Justification.by("Adj", a, b))

    def ce(self, line: int) -> int:
        return self._add(self.formula(line).left, Justification.by("CE", line))

    def eq1(self, eqv_line: int, target: int, paths) -> int:
        _, new = match_eqv(self.formula(eqv_line))
        f = replace_at(self.formula(target), paths, new)
        return self._add(f, Justification.by("Eq1", eqv_line, target, paths=paths))

    # -- lemmas -------------------------------------------------------------

    def dne(self, x: Formula) -> int:
        """x** ⇒ x, from A1 at x* and commutation of ∘."""
        a1 = self.axiom("A1", phi=Star(x))
        comm = self.circ_comm(Star(x), dstar(x))
        return self.eq1(comm, a1, [(0,)])

    def circ_comm(self, a: Formula, b: Formula) -> int:
        """(a∘b) ⇔ (b∘a)"""
        return self.adj(self.axiom("A2", phi=a, psi=b), self.axiom("A2", phi=b, psi=a))

    def dn_eqv(self, x: Formula, introduce: bool = True) -> int:
        """x ⇔ x** when ``introduce``, else x** ⇔ x."""
        a3, dn = self.axiom("A3", phi=x), self.dne(x)
        return self.adj(a3, dn) if introduce else self.adj(dn, a3)

    def replace(self, target: int, old: Formula, new: Formula, paths) -> int:
        """Eq1 rewriting ``old`` to ``new`` where new = old** or old = new**."""
        if new == dstar(old):
            e = self.dn_eqv(old, introduce=True)
        elif old == dstar(new):
            e = self.dn_eqv(new, introduce=False)
        else:
            raise ValueError("no equivalence lemma for this rewrite")
        return self.eq1(e, target, paths)

    def contraposition(self, a: Formula, b: Formula) -> int:
        """(a⇒b) ⇒ (b*⇒a*)"""
        line = self.axiom("A1", phi=imp(a, b))
        line = self.eq1(self.circ_comm(a, Star(b)), line, [(0, 1, 0, 0)])
        return self.replace(line, a, dstar(a), [(0, 1, 0, 0, 1)])

    def build(self) -> Proof:
        return Proof(self.system, self.premises, tuple(self.steps), self.name, self.note)


def _paths_of(f: Formula, sub: Formula, candidates) -> list:
    out = [c for c in candidates if subterm_at(f, c) == sub]
    assert out, "lemma path bookkeeping"
    return out


# -- individual derivations ---------------------------------------------------

def aristotle_1() -> Proof:
    b = ProofBuilder("NL", name="aristotle-1", note="(p⇒p*)*")
    cc = b.mp(b.axiom("A4", phi=p, psi=p), b.axiom("A1", phi=p))
    cc = b.replace(cc, p, dstar(p), [(1,)])
    b.replace(cc, b.formula(cc), dstar(b.formula(cc)), [()])
    return b.build()


def aristotle_2() -> Proof:
    b = ProofBuilder("NL", name="aristotle-2", note="(p*⇒p)*")
    cc = b.mp(b.axiom("A4", phi=Star(p), psi=Star(p)), b.axiom("A1", phi=Star(p)))
    b.replace(cc, b.formula(cc), dstar(b.formula(cc)), [()])
    return b.build()


def boethius_1() -> Proof:
    b = ProofBuilder("NL", name="boethius-1", note="(p⇒q)⇒(p⇒q*)*")
    line = b.axiom("A4", phi=p, psi=q)
    line = b.replace(line, q, dstar(q), [(0, 1, 0, 1)])
    inner = Circ(p, dstar(q))
    b.replace(line, inner, dstar(inner), [(0, 1, 0)])
    return b.build()


def boethius_2() -> Proof:
    b = ProofBuilder("NL", name="boethius-2", note="(p⇒q*)⇒(p⇒q)*")
    line = b.axiom("A4", phi=p, psi=Star(q))
    inner = Circ(p, Star(q))
    b.replace(line, inner, dstar(inner), [(0, 1, 0)])
    return b.build()


def contraposition() -> Proof:
    b = ProofBuilder("NL", name="contraposition", note="(p⇒q)⇒(q*⇒p*)")
    b.contraposition(p, q)
    return b.build()


def dni_converse() -> Proof:
    b = ProofBuilder("NeL", name="dni-converse", note="p**⇒p")
    b.dne(p)
    return b.build()


def mp1() -> Proof:
    b = ProofBuilder("NeL", premises=(p, eqv(p, q)), name="mp1",
                     note="p, p⇔q ⊢ q using MP and CE")
    x = b.premise(0)
    e = b.premise(1)
    b.mp(b.ce(e), x)
    return b.build()


def a5_to_a5star() -> Proof:
    b = ProofBuilder("NL", name="a5-to-a5star", note="A5* from A5 by CE")
    b.ce(b.axiom("A5", phi=p, psi=q))
    return b.build()


def a5star_to_a5() -> Proof:
    b = ProofBuilder("NL[A5*]", name="a5star-to-a5", note="A5 from two A5* instances by Adj")
    b.adj(b.axiom("A5*", phi=p, psi=q), b.axiom("A5*", phi=q, psi=p))
    return b.build()


def equiv_r() -> Proof:
    b = ProofBuilder("NeL", name="equiv-R", note="⊢ Δ(p,p)")
    a = b.axiom("A1", phi=p)
    b.adj(a, a)
    return b.build()


def equiv_mop() -> Proof:
    b = ProofBuilder("NeL", premises=(p, imp(p, q), imp(q, p)), name="equiv-MoP",
                     note="p, Δ(p,q) ⊢ q")
    x = b.premise(0)
    b.premise(2)
    b.mp(b.premise(1), x)
    return b.build()


def _equiv_re(op) -> Proof:
    x1, y1, x2, y2 = Var("x1"), Var("y1"), Var("x2"), Var("y2")
    label = "tensor" if op is Tensor else "circ"
    b = ProofBuilder("NeL", premises=(imp(x1, y1), imp(y1, x1), imp(x2, y2), imp(y2, x2)),
                     name=f"equiv-Re-{label}", note=f"Δ(x1,y1), Δ(x2,y2) ⊢ Δ of the {label} terms")
    fwd1 = b.adj(b.premise(0), b.premise(1))
    bwd1 = b.adj(b.premise(1), b.premise(0))
    fwd2 = b.adj(b.premise(2), b.premise(3))
    bwd2 = b.adj(b.premise(3), b.premise(2))
    there = b.axiom("A1", phi=op(x1, x2))
    there = b.eq1(fwd2, b.eq1(fwd1, there, [(0, 1, 0, 0)]), [(0, 1, 0, 1)])
    back = b.axiom("A1", phi=op(y1, y2))
    back = b.eq1(bwd2, b.eq1(bwd1, back, [(0, 1, 0, 0)]), [(0, 1, 0, 1)])
    b.adj(there, back)
    return b.build()


def equiv_re_star() -> Proof:
    x, y = Var("x1"), Var("y1")
    b = ProofBuilder("NeL", premises=(imp(x, y), imp(y, x)), name="equiv-Re-star",
                     note="Δ(x1,y1) ⊢ Δ(x1*,y1*)")
    fwd = b.adj(b.premise(0), b.premise(1))
    bwd = b.adj(b.premise(1), b.premise(0))
    there = b.eq1(fwd, b.axiom("A1", phi=Star(x)), [(0, 1, 0, 0)])
    back = b.eq1(bwd, b.axiom("A1", phi=Star(y)), [(0, 1, 0, 0)])
    b.adj(there, back)
    return b.build()


def _explode(b: ProofBuilder, s_line_pp, s_line_p3) -> int:
    """From S-instances (p⊗p)⇒p and (p⊗p***)⇒p derive X ⊗ X* with X = (p⊗p*)⇒p*."""
    x = b.mp(b.axiom("A6", phi=p, psi=p, chi=p), s_line_pp)
    y = b.mp(b.axiom("A6", phi=p, psi=Star(dstar(p)), chi=p), s_line_p3)
    # y: (p⊗p*) ⇒ p****; rewrite p**** to p**
    y = b.replace(y, dstar(dstar(p)), dstar(p), [(0, 1, 0)])
    tee = Tensor(p, Star(p))
    c = b.mp(b.axiom("A4", phi=tee, psi=dstar(p)), y)
    body = b.formula(c)
    xs = b.replace(c, body, dstar(body), [()])
    return b.adj(x, xs)


def s_triviality() -> Proof:
    b = ProofBuilder("NL+S", name="s-triviality",
                     note="NL+S proves a formula together with its star")
    _explode(b, b.axiom("S", phi=p, psi=p), b.axiom("S", phi=p, psi=Star(dstar(p))))
    return b.build()


def id1_triviality() -> Proof:
    b = ProofBuilder("NL++Id1", name="id1-triviality", note="(p⊗p*)⇒p* from Id1 and A6")
    b.mp(b.axiom("A6", phi=p, psi=p, chi=p), b.axiom("Id1", phi=p))
    return b.build()


def _s_from_d(b: ProofBuilder, a: Formula, c: Formula) -> int:
    """(a⊗c)⇒a from D, contraposition and double negation."""
    alpha, beta = Star(a), Star(c)
    d = b.axiom("D", phi=alpha, psi=beta)
    line = b.mp(b.contraposition(alpha, oplus(alpha, beta)), d)
    # ((α*⊗β*)**) ⇒ α*  →  (α*⊗β*) ⇒ α*
    inner = Tensor(Star(alpha), Star(beta))
    line = b.replace(line, dstar(inner), inner, [(0, 0)])
    # α* = a**, β* = c**; strip the double stars
    f = b.formula(line)
    line = b.replace(line, dstar(a), a, _paths_of(f, dstar(a), [(0, 0, 0), (0, 0, 1), (0, 1, 0)]))
    if c != a:
        line = b.replace(line, dstar(c), c, [(0, 0, 1)])
    return line


def d_triviality() -> Proof:
    b = ProofBuilder("NL+D", name="d-triviality",
                     note="NL+D proves simplification instances, then explodes as with S")
    s_pp = _s_from_d(b, p, p)
    s_p3 = _s_from_d(b, p, Star(dstar(p)))
    _explode(b, s_pp, s_p3)
    return b.build()


BUILDERS = {
    "aristotle-1": aristotle_1,
    "aristotle-2": aristotle_2,
    "boethius-1": boethius_1,
    "boethius-2": boethius_2,
    "contraposition": contraposition,
    "dni-converse": dni_converse,
    "mp1": mp1,
    "a5-to-a5star": a5_to_a5star,
    "a5star-to-a5": a5star_to_a5,
    "equiv-R": equiv_r,
    "equiv-MoP": equiv_mop,
    "equiv-Re-tensor": lambda: _equiv_re(Tensor),
    "equiv-Re-circ": lambda: _equiv_re(Circ),
    "equiv-Re-star": equiv_re_star,
    "s-triviality": s_triviality,
    "id1-triviality": id1_triviality,
    "d-triviality": d_triviality,
}


@lru_cache(maxsize=None)
def _all() -> tuple[Proof, ...]:
    return tuple(make() for make in BUILDERS.values())


def all_proofs() -> list[Proof]:
    return list(_all())
