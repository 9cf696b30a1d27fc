"""Order structures induced by an incompatibility relation.

x ≾ y iff x ⊥ y*.  On models with transitive ≾ this is a poset with
antitone involution; its ⊥-closed sets and its Dedekind–MacNeille
completion are finite lattices with involution, materialized explicitly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .model import FiniteNModel

__all__ = [
    "OrderError", "ClosureInapplicable", "PAIPoset", "InvolutionLattice", "OrthoReport",
    "poset_from_model", "poset_from_relation", "bounds", "perp_set", "perp_closure",
    "closed_set_lattice", "dm_completion", "dm_embedding_failures", "ortho_checks",
    "orthoisomorphism", "residuation_check", "nogo_checks", "embedding_check",
    "orthomodularity_witness_from_model", "lattice_from_covers",
]


class OrderError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message if witness is None else f"{message}: {witness}")
        self.witness = witness


class ClosureInapplicable(OrderError):
    """⊥ is reflexive somewhere, so X ↦ X^⊥⊥ need not be a closure operator."""


@dataclass(frozen=True)
class PAIPoset:
    elements: tuple[str, ...]
    leq: tuple[tuple[bool, ...], ...]
    star: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, name) -> int:
        return name if isinstance(name, int) else self.elements.index(name)

    def le(self, x, y) -> bool:
        return self.leq[self.index(x)][self.index(y)]

    def violations(self) -> list[tuple[str, tuple]]:
        n, le, s, nm = self.size, self.leq, self.star, self.elements
        out = []
        for x in range(n):
            if not le[x][x]:
                out.append(("reflexive", (nm[x],)))
            if s[s[x]] != x:
                out.append(("involution", (nm[x],)))
        for x, y in itertools.product(range(n), repeat=2):
            if x != y and le[x][y] and le[y][x]:
                out.append(("antisymmetric", (nm[x], nm[y])))
            if le[x][y] and not le[s[y]][s[x]]:
                out.append(("antitone", (nm[x], nm[y])))
        for x, y, z in itertools.product(range(n), repeat=3):
            if le[x][y] and le[y][z] and not le[x][z]:
                out.append(("transitive", (nm[x], nm[y], nm[z])))
        return out

    def covers(self) -> list[tuple[str, str]]:
        n, le = self.size, self.leq
        out = []
        for x, y in itertools.product(range(n), repeat=2):
            if x != y and le[x][y] and not any(
                    z not in (x, y) and le[x][z] and le[z][y] for z in range(n)):
                out.append((self.elements[x], self.elements[y]))
        return out

    def to_dot(self) -> str:
        lines = ["digraph poset {", "  rankdir=BT;"]
        for x in self.elements:
            lines.append(f'  "{x}";')
        for x, y in self.covers():
            lines.append(f'  "{x}" -> "{y}";')
        for i, j in enumerate(self.star):
            if i < j:
                lines.append(f'  "{self.elements[i]}" -> "{self.elements[j]}" '
                             '[style=dashed, dir=both, constraint=false];')
        lines.append("}")
        return "\n".join(lines)


def poset_from_model(m: FiniteNModel) -> PAIPoset:
    """(A, ≾, *) with x ≾ y iff x ⊥ y*; rejects the model if this is not a poset."""
    a = m.algebra
    n = a.size
    leq = tuple(tuple((x, a.star[y]) in m.perp.pairs for y in range(n)) for x in range(n))
    p = PAIPoset(a.carrier, leq, a.star)
    bad = p.violations()
    if bad:
        kind, wit = bad[0]
        raise OrderError(f"≾ is not a partial order with antitone involution ({kind})", wit)
    return p


def poset_from_relation(elements: Sequence[str], pairs: Iterable[tuple[str, str]],
                        star: Sequence[str]) -> PAIPoset:
    """Reflexive–transitive closure of ``pairs``; no validation is applied."""
    elements = tuple(elements)
    pos = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    le = [[x == y for y in range(n)] for x in range(n)]
    for x, y in pairs:
        le[pos[x]][pos[y]] = True
    for k, i, j in itertools.product(range(n), repeat=3):
        if le[i][k] and le[k][j]:
            le[i][j] = True
    return PAIPoset(elements, tuple(map(tuple, le)), tuple(pos[s] for s in star))


def bounds(p: PAIPoset, xs: Iterable) -> tuple[frozenset[int], frozenset[int]]:
    """(L(X), U(X)) as index sets."""
    xs = [p.index(x) for x in xs]
    rng = range(p.size)
    low = frozenset(y for y in rng if all(p.leq[y][x] for x in xs))
    up = frozenset(y for y in rng if all(p.leq[x][y] for x in xs))
    return low, up


# -- lattices with involution ------------------------------------------------

@dataclass(frozen=True)
class InvolutionLattice:
    """Finite poset with a unary map, expected to be a bounded lattice with involution."""

    labels: tuple[Hashable, ...]
    leq: tuple[tuple[bool, ...], ...]
    inv: tuple[int, ...]
    embedding: tuple[int, ...] | None = None  # source element -> lattice element
    names: tuple[str, ...] | None = None  # element names for set labels

    @property
    def size(self) -> int:
        return len(self.labels)

    def _extreme(self, cands, lower: bool):
        for c in cands:
            if all((self.leq[c][d] if lower else self.leq[d][c]) for d in cands):
                return c
        return None

    def meet(self, i: int, j: int) -> int | None:
        lows = [k for k in range(self.size) if self.leq[k][i] and self.leq[k][j]]
        return self._extreme(lows, lower=False)

    def join(self, i: int, j: int) -> int | None:
        ups = [k for k in range(self.size) if self.leq[i][k] and self.leq[j][k]]
        return self._extreme(ups, lower=True)

    @property
    def bottom(self) -> int | None:
        return self._extreme(range(self.size), lower=True)

    @property
    def top(self) -> int | None:
        return self._extreme(range(self.size), lower=False)

    def label(self, i: int) -> str:
        lab = self.labels[i]
        if isinstance(lab, frozenset):
            nm = self.names
            return "{" + ",".join(sorted(nm[x] if nm else str(x) for x in lab)) + "}"
        return str(lab)

    def to_dot(self) -> str:
        lines = ["digraph lattice {", "  rankdir=BT;"]
        n = self.size
        for i in range(n):
            lines.append(f'  n{i} [label="{self.label(i)}"];')
        for i, j in itertools.product(range(n), repeat=2):
            if i != j and self.leq[i][j] and not any(
                    k not in (i, j) and self.leq[i][k] and self.leq[k][j] for k in range(n)):
                lines.append(f"  n{i} -> n{j};")
        for i, j in enumerate(self.inv):
            if i < j:
                lines.append(f"  n{i} -> n{j} [style=dashed, dir=both, constraint=false];")
        lines.append("}")
        return "\n".join(lines)


def _set_lattice(sets: Sequence[frozenset], inv_of, embedding=None, names=None) -> InvolutionLattice:
    sets = sorted(set(sets), key=lambda s: (len(s), sorted(s)))
    pos = {s: i for i, s in enumerate(sets)}
    leq = tuple(tuple(a <= b for b in sets) for a in sets)
    inv = tuple(pos[inv_of(s)] for s in sets)
    emb = None if embedding is None else tuple(pos[e] for e in embedding)
    return InvolutionLattice(tuple(sets), leq, inv, emb, None if names is None else tuple(names))


def lattice_from_covers(labels: Sequence[str], covers: Iterable[tuple[str, str]],
                        inv: dict[str, str]) -> InvolutionLattice:
    p = poset_from_relation(labels, covers, [inv[x] for x in labels])
    return InvolutionLattice(tuple(labels), p.leq, p.star)


# -- ⊥ closure -----------------------------------------------------------------

def _require_closure_theory(m: FiniteNModel):
    n = m.size
    for x in range(n):
        if (x, x) in m.perp.pairs:
            raise ClosureInapplicable("⊥ is reflexive, closure theory inapplicable",
                                      (m.carrier[x],))
    for x, y in m.perp.pairs:
        if (y, x) not in m.perp.pairs:
            raise ClosureInapplicable("⊥ is not symmetric", (m.carrier[x], m.carrier[y]))


def perp_set(m: FiniteNModel, xs: Iterable[int]) -> frozenset[int]:
    xs = list(xs)
    return frozenset(y for y in range(m.size) if all((x, y) in m.perp.pairs for x in xs))


def perp_closure(m: FiniteNModel, xs: Iterable, check: bool = True) -> frozenset[int]:
    """X^⊥⊥ (indices)."""
    if check:
        _require_closure_theory(m)
    xs = [m.algebra.index(x) for x in xs]
    return perp_set(m, perp_set(m, xs))


def closed_set_lattice(m: FiniteNModel) -> InvolutionLattice:
    _require_closure_theory(m)
    n = m.size
    closed = {perp_set(m, perp_set(m, sub))
              for k in range(n + 1) for sub in itertools.combinations(range(n), k)}
    emb = [perp_set(m, perp_set(m, [x])) for x in range(n)]
    return _set_lattice(list(closed), lambda s: perp_set(m, s), emb, m.carrier)


# -- Dedekind–MacNeille -------------------------------------------------------

def dm_completion(p: PAIPoset) -> InvolutionLattice:
    """{X : L(U(X)) = X} ordered by inclusion with X* = L(X′)."""
    n = p.size
    normal = set()
    for k in range(n + 1):
        for sub in itertools.combinations(range(n), k):
            low, _ = bounds(p, bounds(p, sub)[1])
            normal.add(low)
    emb = [bounds(p, [x])[0] for x in range(n)]
    return _set_lattice(list(normal), lambda s: bounds(p, [p.star[x] for x in s])[0], emb, p.elements)


def dm_embedding_failures(p: PAIPoset, dm: InvolutionLattice) -> list[str]:
    """Order/star embedding, preservation of existing joins and meets,
    and density (every element a join and a meet of embedded points)."""
    out = []
    e = dm.embedding
    n = p.size
    for x, y in itertools.product(range(n), repeat=2):
        if p.leq[x][y] != dm.leq[e[x]][e[y]]:
            out.append(f"order not reflected at {p.elements[x]},{p.elements[y]}")
        if x != y and e[x] == e[y]:
            out.append(f"not injective at {p.elements[x]},{p.elements[y]}")
    for x in range(n):
        if e[p.star[x]] != dm.inv[e[x]]:
            out.append(f"star not preserved at {p.elements[x]}")
    for x, y in itertools.product(range(n), repeat=2):
        low, up = bounds(p, [x, y])
        for cands, op, greatest in ((low, dm.meet, True), (up, dm.join, False)):
            best = [c for c in cands if all((p.leq[d][c] if greatest else p.leq[c][d]) for d in cands)]
            if best and op(e[x], e[y]) != e[best[0]]:
                out.append(f"existing {'meet' if greatest else 'join'} of "
                           f"{p.elements[x]},{p.elements[y]} not preserved")
    images = set(e)
    for i in range(dm.size):
        below = [j for j in images if dm.leq[j][i]]
        above = [j for j in images if dm.leq[i][j]]
        # least upper bound of `below` must be i, greatest lower bound of `above` must be i
        ub = [k for k in range(dm.size) if all(dm.leq[j][k] for j in below)]
        lb = [k for k in range(dm.size) if all(dm.leq[k][j] for j in above)]
        if not (i in ub and all(dm.leq[i][k] for k in ub)):
            out.append(f"{dm.label(i)} is not a join of embedded points")
        if not (i in lb and all(dm.leq[k][i] for k in lb)):
            out.append(f"{dm.label(i)} is not a meet of embedded points")
    return out


# -- ortho diagnostics ----------------------------------------------------------

@dataclass
class OrthoReport:
    lattice: bool
    ortholattice: bool
    orthomodular: bool
    boolean: bool
    witnesses: dict[str, tuple] = field(default_factory=dict)

    def summary(self) -> str:
        def yn(b, key):
            w = self.witnesses.get(key)
            return "yes" if b else ("NO" + (f" (witness {w})" if w else ""))
        return (f"lattice: {yn(self.lattice, 'lattice')}, ortholattice: {yn(self.ortholattice, 'ortholattice')}, "
                f"orthomodular: {yn(self.orthomodular, 'orthomodular')}, boolean: {yn(self.boolean, 'boolean')}")


def ortho_checks(l: InvolutionLattice) -> OrthoReport:
    n, le, inv = l.size, l.leq, l.inv
    w: dict[str, tuple] = {}
    rng = range(n)
    bot, top = l.bottom, l.top
    lattice = bot is not None and top is not None
    if not lattice:
        w["lattice"] = ("unbounded",)
    meet, join = {}, {}
    if lattice:
        for i, j in itertools.product(rng, repeat=2):
            meet[i, j], join[i, j] = l.meet(i, j), l.join(i, j)
            if meet[i, j] is None or join[i, j] is None:
                lattice = False
                w["lattice"] = (l.label(i), l.label(j))
                break
    if not lattice:
        return OrthoReport(False, False, False, False, w)

    ortho = True
    for i in rng:
        if inv[inv[i]] != i:
            ortho, w["ortholattice"] = False, ("involution", l.label(i))
            break
        if meet[i, inv[i]] != bot or join[i, inv[i]] != top:
            ortho, w["ortholattice"] = False, ("complement", l.label(i))
            break
    if ortho:
        for i, j in itertools.product(rng, repeat=2):
            if le[i][j] and not le[inv[j]][inv[i]]:
                ortho, w["ortholattice"] = False, ("antitone", l.label(i), l.label(j))
                break

    om = ortho
    if ortho:
        for i, j in itertools.product(rng, repeat=2):
            if i != j and le[i][j] and meet[inv[i], j] == bot:
                om, w["orthomodular"] = False, (l.label(i), l.label(j))
                break

    boolean = ortho
    if ortho:
        for i, j, k in itertools.product(rng, repeat=3):
            if meet[i, join[j, k]] != join[meet[i, j], meet[i, k]]:
                boolean, w["boolean"] = False, (l.label(i), l.label(j), l.label(k))
                break
    return OrthoReport(True, ortho, om, boolean, w)


def _rank(l: InvolutionLattice) -> list[int]:
    n = l.size
    rank = [0] * n
    order = sorted(range(n), key=lambda i: sum(l.leq[j][i] for j in range(n)))
    for i in order:
        below = [j for j in range(n) if j != i and l.leq[j][i]]
        rank[i] = 1 + max((rank[j] for j in below), default=-1)
    return rank


def orthoisomorphism(l1: InvolutionLattice, l2: InvolutionLattice) -> dict[int, int] | None:
    """A bijection preserving and reflecting order and commuting with the involutions."""
    n = l1.size
    if n != l2.size:
        return None

    def profile(l):
        r = _rank(l)
        return [(r[i], sum(l.leq[j][i] for j in range(n)), sum(l.leq[i][j] for j in range(n)))
                for i in range(n)]

    p1, p2 = profile(l1), profile(l2)
    if sorted(p1) != sorted(p2):
        return None
    order = sorted(range(n), key=lambda i: p1[i])
    f: dict[int, int] = {}
    used: set[int] = set()

    def consistent(i, j) -> bool:
        for a, b in f.items():
            if l1.leq[i][a] != l2.leq[j][b] or l1.leq[a][i] != l2.leq[b][j]:
                return False
        return True

    def assign(i, j) -> list[int] | None:
        # assigning i ↦ j forces inv(i) ↦ inv(j)
        pairs = [(i, j), (l1.inv[i], l2.inv[j])]
        added = []
        for a, b in pairs:
            if a in f:
                if f[a] != b:
                    for x in added:
                        used.discard(f.pop(x))
                    return None
                continue
            if b in used or p1[a] != p2[b] or not consistent(a, b):
                for x in added:
                    used.discard(f.pop(x))
                return None
            f[a] = b
            used.add(b)
            added.append(a)
        return added

    def rec(k: int) -> bool:
        while k < n and order[k] in f:
            k += 1
        if k == n:
            return True
        i = order[k]
        for j in range(n):
            if j in used or p2[j] != p1[i]:
                continue
            added = assign(i, j)
            if added is None:
                continue
            if rec(k + 1):
                return True
            for x in added:
                used.discard(f.pop(x))
        return False

    return dict(f) if rec(0) else None


# -- model-level checks ----------------------------------------------------------

@dataclass
class CheckReport:
    ok: bool
    witness: tuple | None = None
    note: str = ""

    def __bool__(self):
        return self.ok


def residuation_check(m: FiniteNModel) -> CheckReport:
    """x⊗y ≾ z iff x ≾ y⊃z (with y⊃z = y*⊕z), plus monotonicity of ⊗ and ⊕."""
    p = poset_from_model(m)
    a = m.algebra
    n, le, nm = a.size, p.leq, a.carrier
    t = a.tensor

    def hook(y, z):
        return a.oplus(a.star[y], z)

    for x, y, z in itertools.product(range(n), repeat=3):
        if le[t[x][y]][z] != le[x][hook(y, z)]:
            return CheckReport(False, ("residuation", nm[x], nm[y], nm[z]))
        if le[x][y] and not le[t[x][z]][t[y][z]]:
            return CheckReport(False, ("tensor-monotone", nm[x], nm[y], nm[z]))
        if le[x][y] and not le[a.oplus(x, z)][a.oplus(y, z)]:
            return CheckReport(False, ("oplus-monotone", nm[x], nm[y], nm[z]))
    return CheckReport(True, note="partially ordered commutative involutive residuated groupoid")


def nogo_checks(p: PAIPoset) -> CheckReport:
    """Two structural properties of induced posets of nontrivial models:

    (i)  x ≾ y implies no z has z ≾ x* and z ≾ y;
    (ii) if x is comparable with z* and y with z, then L(x,y) = ∅ = U(x,y).
    """
    n, le, s, nm = p.size, p.leq, p.star, p.elements
    if n == 1:
        return CheckReport(True, note="vacuous: one-point poset")

    def comparable(u, v):
        return le[u][v] or le[v][u]

    for x, y, z in itertools.product(range(n), repeat=3):
        if le[x][y] and le[z][s[x]] and le[z][y]:
            return CheckReport(False, ("first", nm[x], nm[y], nm[z]))
    for x, y, z in itertools.product(range(n), repeat=3):
        if comparable(x, s[z]) and comparable(y, z):
            low, up = bounds(p, [x, y])
            if low or up:
                return CheckReport(False, ("second", nm[x], nm[y], nm[z]))
    return CheckReport(True)


def embedding_check(m: FiniteNModel) -> CheckReport:
    """Whether x ↦ {x}^⊥⊥ embeds (A, ≾, *) into the closed-set lattice."""
    _require_closure_theory(m)
    a = m.algebra
    n, s, nm = a.size, a.star, a.carrier
    h = [perp_closure(m, [x], check=False) for x in range(n)]
    for x, y in itertools.product(range(n), repeat=2):
        below = (x, s[y]) in m.perp.pairs
        if below != (h[x] <= h[y]):
            return CheckReport(False, ("order", nm[x], nm[y]))
    for x in range(n):
        if h[s[x]] != perp_set(m, h[x]):
            return CheckReport(False, ("star", nm[x]))
    return CheckReport(True)


def orthomodularity_witness_from_model(m: FiniteNModel):
    """Closed sets X ⊊ Y with X^⊥ ∩ Y = ∅, built from a pair a,b where
    (a∘b)⇒(a⇒b) fails: X = {a⇒b}^⊥⊥ and Y = {a∘b}^⊥⊥."""
    _require_closure_theory(m)
    a = m.algebra
    for x, y in itertools.product(range(a.size), repeat=2):
        ab_imp, ab_circ = a.imp(x, y), a.circ[x][y]
        X = perp_closure(m, [ab_imp], check=False)
        Y = perp_closure(m, [ab_circ], check=False)
        if X < Y and not (perp_set(m, X) & Y):
            return (a.carrier[x], a.carrier[y]), X, Y
    return None
