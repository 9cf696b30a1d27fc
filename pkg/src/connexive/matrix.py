"""Logical matrices over finite algebras and the bridge to incompatibility models."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .calculus import AXIOMS, get_system
from .formula import variables_of
from .model import (
    FiniteAlgebra, FiniteNModel, IncompatibilityRelation, compile_formula, validate_nmodel,
)

__all__ = [
    "Matrix", "Congruence", "PreconditionViolation", "BridgeReport",
    "set_partitions", "is_congruence", "congruences", "leibniz", "leibniz_refine",
    "leibniz_via_arrows", "perp_from_filter", "filter_from_perp", "matrix_of",
    "nel_filter_violations", "is_reduced_model", "roundtrip_check",
]


@dataclass(frozen=True)
class Matrix:
    algebra: FiniteAlgebra
    filter: frozenset[int]

    @classmethod
    def of(cls, algebra: FiniteAlgebra, names: Iterable) -> "Matrix":
        return cls(algebra, frozenset(algebra.index(x) for x in names))

    def filter_names(self) -> list[str]:
        return [self.algebra.carrier[x] for x in sorted(self.filter)]


@dataclass(frozen=True)
class Congruence:
    """A partition of the carrier, stored as block labels (restricted growth form)."""

    labels: tuple[int, ...]

    @classmethod
    def from_labels(cls, labels) -> "Congruence":
        seen: dict[int, int] = {}
        return cls(tuple(seen.setdefault(x, len(seen)) for x in labels))

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: dict[int, list[int]] = {}
        for x, b in enumerate(self.labels):
            out.setdefault(b, []).append(x)
        return tuple(tuple(v) for v in out.values())

    def related(self, x: int, y: int) -> bool:
        return self.labels[x] == self.labels[y]

    def is_identity(self) -> bool:
        return len(set(self.labels)) == len(self.labels)

    def refines(self, other: "Congruence") -> bool:
        return all(other.related(x, y) for blk in self.blocks for x in blk for y in blk)

    def named_blocks(self, a: FiniteAlgebra) -> list[list[str]]:
        return [[a.carrier[x] for x in blk] for blk in self.blocks]


class PreconditionViolation(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """All partitions of range(n) as restricted growth strings."""
    if n == 0:
        yield ()
        return
    labels = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(labels)
            return
        for b in range(top + 2):
            labels[i] = b
            yield from rec(i + 1, max(top, b))

    yield from rec(1, 0)


def is_congruence(a: FiniteAlgebra, labels) -> bool:
    n = a.size
    for x, y in itertools.combinations(range(n), 2):
        if labels[x] != labels[y]:
            continue
        if labels[a.star[x]] != labels[a.star[y]]:
            return False
        for z in range(n):
            for table in (a.tensor, a.circ):
                if labels[table[x][z]] != labels[table[y][z]]:
                    return False
                if labels[table[z][x]] != labels[table[z][y]]:
                    return False
    return True


def _compatible(labels, filt: frozenset[int]) -> bool:
    inside: dict[int, bool] = {}
    for x, b in enumerate(labels):
        if inside.setdefault(b, x in filt) != (x in filt):
            return False
    return True


def congruences(a: FiniteAlgebra) -> list[Congruence]:
    return [Congruence(l) for l in set_partitions(a.size) if is_congruence(a, l)]


def leibniz(m: Matrix) -> Congruence:
    """Largest filter-compatible congruence, by enumerating every partition."""
    candidates = [Congruence(l) for l in set_partitions(m.algebra.size)
                  if is_congruence(m.algebra, l) and _compatible(l, m.filter)]
    # the compatible congruences form a complete sublattice, so the coarsest is unique
    best = min(candidates, key=lambda c: (len(c.blocks), c.labels))
    assert all(c.refines(best) for c in candidates), "compatible congruences lack a maximum"
    return best


def leibniz_refine(m: Matrix) -> Congruence:
    """Same congruence by partition refinement, starting from {F, A∖F}."""
    a = m.algebra
    labels = [int(x in m.filter) for x in range(a.size)]
    while True:
        sig = [
            (labels[x], labels[a.star[x]],
             tuple(labels[a.tensor[x][z]] for z in range(a.size)),
             tuple(labels[a.circ[x][z]] for z in range(a.size)))
            for x in range(a.size)
        ]
        new = Congruence.from_labels(sig).labels
        if len(set(new)) == len(set(labels)):
            return Congruence.from_labels(new)
        labels = list(new)


def _arrow_relation(m: Matrix) -> list[list[bool]]:
    a, F = m.algebra, m.filter
    n = a.size
    return [[a.imp(x, y) in F and a.imp(y, x) in F for y in range(n)] for x in range(n)]


def leibniz_via_arrows(m: Matrix) -> Congruence:
    """a ≡ b iff a⇒b and b⇒a are designated; must be an equivalence and a congruence."""
    rel = _arrow_relation(m)
    n = m.algebra.size
    for x in range(n):
        if not rel[x][x]:
            raise PreconditionViolation("relation is not reflexive", (x,))
    for x, y, z in itertools.product(range(n), repeat=3):
        if rel[x][y] and rel[y][z] and not rel[x][z]:
            raise PreconditionViolation("relation is not transitive", (x, y, z))
    labels = [min(y for y in range(n) if rel[x][y]) for x in range(n)]
    cong = Congruence.from_labels(labels)
    if not is_congruence(m.algebra, cong.labels):
        raise PreconditionViolation("relation is not compatible with the operations")
    return cong


def perp_from_filter(a: FiniteAlgebra, g: Iterable[int]) -> IncompatibilityRelation:
    """⊥_G: a⊥b iff a⇒b* ∈ G, a⊥𝖿 iff a ∈ G, a⊥𝗍 iff a* ∈ G."""
    g = frozenset(g)
    n = a.size
    pairs = frozenset((x, y) for x in range(n) for y in range(n) if a.imp(x, a.star[y]) in g)
    return IncompatibilityRelation(pairs, frozenset(x for x in range(n) if a.star[x] in g), g)


def filter_from_perp(perp: IncompatibilityRelation) -> frozenset[int]:
    return perp.to_false


def matrix_of(m: FiniteNModel) -> Matrix:
    return Matrix(m.algebra, m.perp.to_false)


def _pair_subalgebra(a: FiniteAlgebra, x: int, y: int) -> set[tuple[int, int]]:
    """Subalgebra of A×A generated by (x,y) and the diagonal."""
    out = {(c, c) for c in range(a.size)} | {(x, y)}
    frontier = [(x, y)]
    while frontier:
        u = frontier.pop()
        cand = [(a.star[u[0]], a.star[u[1]])]
        for v in list(out):
            for t in (a.tensor, a.circ):
                cand.append((t[u[0]][v[0]], t[u[1]][v[1]]))
                cand.append((t[v[0]][u[0]], t[v[1]][u[1]]))
        for w in cand:
            if w not in out:
                out.add(w)
                frontier.append(w)
    return out


def nel_filter_violations(m: Matrix, system: str = "NeL") -> list[str]:
    """Clauses defining a logical filter of the given consequence system.

    (1) axioms designated, (2) closure under modus ponens, (3) F is
    closed under ⊗ in both directions, (4) whenever a⇒b and b⇒a are in F,
    δ(a,c̄)⇒δ(b,c̄) is in F for every unary polynomial δ.
    """
    a, F = m.algebra, m.filter
    n = a.size
    names = a.carrier
    out = []
    if not F:
        out.append("filter is empty")
    for schema in sorted(get_system(system).axioms):
        f = AXIOMS[schema]
        order = variables_of(f)
        fn = compile_formula(a, f, order)
        for vals in itertools.product(range(n), repeat=len(order)):
            if fn(vals) not in F:
                out.append(f"(1) {schema} at {tuple(names[v] for v in vals)}")
                break
    for x, y in itertools.product(range(n), repeat=2):
        if x in F and a.imp(x, y) in F and y not in F:
            out.append(f"(2) {names[x]}, {names[x]}⇒{names[y]} designated but {names[y]} not")
        if (x in F and y in F) != (a.tensor[x][y] in F):
            out.append(f"(3) at {names[x]}, {names[y]}")
    rel = _arrow_relation(m)
    for x, y in itertools.product(range(n), repeat=2):
        if x != y and rel[x][y]:
            for u, v in _pair_subalgebra(a, x, y):
                if a.imp(u, v) not in F:
                    out.append(f"(4) from {names[x]}≡{names[y]}: {names[u]}⇒{names[v]} not designated")
                    break
    return out


def is_reduced_model(m: Matrix, system: str = "NeL") -> bool:
    return not nel_filter_violations(m, system) and leibniz_refine(m).is_identity()


@dataclass
class BridgeReport:
    filter_roundtrip: bool
    perp_roundtrip: bool | None
    reduced: bool
    is_model: bool
    details: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        rt = self.filter_roundtrip and self.perp_roundtrip is not False
        return rt and self.reduced == self.is_model

    def __bool__(self):
        return self.ok


def roundtrip_check(obj: Matrix | FiniteNModel) -> BridgeReport:
    """Check G = F(⊥_G), ⊥ = ⊥_{F(⊥)} and that reducedness matches model-hood."""
    if isinstance(obj, FiniteNModel):
        a, g = obj.algebra, obj.perp.to_false
        perp_g = perp_from_filter(a, g)
        perp_rt = perp_g == obj.perp
        is_model = validate_nmodel(obj).ok
        # model side: M ∈ Nw iff ⟨A,F⟩ reduced and ⊥ = ⊥_F
        reduced = is_reduced_model(Matrix(a, g)) and perp_rt
    else:
        a, g = obj.algebra, obj.filter
        perp_g = perp_from_filter(a, g)
        perp_rt = None
        is_model = validate_nmodel(FiniteNModel(a, perp_g)).ok
        reduced = is_reduced_model(obj)
    details = []
    filt_rt = filter_from_perp(perp_g) == g
    if not filt_rt:
        details.append("filter changes under ⊥ round trip")
    if perp_rt is False:
        diff = perp_g.pairs ^ obj.perp.pairs
        details.append(f"⊥ differs from ⊥ induced by its designated set on {len(diff)} pairs")
    if reduced != is_model:
        details.append(f"reduced={reduced} but model={is_model}")
    return BridgeReport(filt_rt, perp_rt, reduced, is_model, details)
