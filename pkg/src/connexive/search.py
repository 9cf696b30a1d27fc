"""Finite model search: enumeration of 𝔑w-models and countermodel finding.

Every model is determined by its algebra plus the designated set F, since
(c) and (d) force x ⊥ y iff (x∘y)* ∈ F and x ⊥ 𝗍 iff x* ∈ F.  The search
therefore fixes * and F first and then fills the ∘ and ⊗ tables cell by
cell.  Each ground instance of a condition is evaluated lazily: when it
touches an empty cell it is parked on that cell's watch list and revisited
once the cell is filled.
"""

from __future__ import annotations

import itertools
import string
import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .formula import Formula, parse, variables_of
from .model import (
    CLASS_TAGS, FiniteAlgebra, FiniteNModel, HornCondition, IncompatibilityRelation,
    compile_formula, validate_nmodel,
)

__all__ = [
    "SearchSpec", "SearchResult", "Countermodel", "enumerate_models", "find_countermodel",
    "canonical_form", "model_from_tables", "involutions", "seed_from_model",
]


@dataclass(frozen=True)
class SearchSpec:
    """What to search for.

    ``classes`` are class tags (``Nw`` is implied); ``horn`` adds further
    universally quantified conditions.  ``target`` is a formula or Horn rule
    to falsify.  ``seed`` pins parts of the structure: keys ``star`` (list),
    ``circ``/``tensor`` (n×n with ``None`` for free cells) and ``F`` (set),
    all as carrier indices.
    """

    carrier_size: int
    classes: frozenset[str] = frozenset({"Nw"})
    horn: tuple[HornCondition, ...] = ()
    target: Formula | HornCondition | None = None
    max_nodes: int | None = None
    max_models: int | None = None
    time_limit: float | None = None
    iso: bool | None = None
    seed: Mapping | None = None
    min_size: int = 1


@dataclass
class SearchResult:
    models: list[FiniteNModel] = field(default_factory=list)
    canonical: list[tuple] = field(default_factory=list)
    nodes: int = 0
    exhausted: bool = True
    elapsed: float = 0.0
    stop_reason: str | None = None


@dataclass
class Countermodel:
    model: FiniteNModel | None
    assignment: dict | None
    size: int | None
    nodes: int
    exhausted_sizes: tuple[int, ...]
    elapsed: float

    @property
    def found(self) -> bool:
        return self.model is not None


class _Blocked(Exception):
    __slots__ = ("cell",)

    def __init__(self, cell: int):
        self.cell = cell


class _Stop(Exception):
    pass


def involutions(n: int, up_to_iso: bool = False) -> list[tuple[int, ...]]:
    """Involutions of range(n); with ``up_to_iso`` one per conjugacy class."""
    if up_to_iso:
        out = []
        for k in range(n // 2 + 1):
            s = list(range(n))
            for i in range(k):
                s[2 * i], s[2 * i + 1] = 2 * i + 1, 2 * i
            out.append(tuple(s))
        return out
    out = []

    def rec(s: list, i: int):
        if i == n:
            out.append(tuple(s))
            return
        if s[i] >= 0:
            rec(s, i + 1)
            return
        s[i] = i
        rec(s, i + 1)
        for j in range(i + 1, n):
            if s[j] < 0:
                s[i], s[j] = j, i
                rec(s, i + 1)
                s[j] = -1
        s[i] = -1

    rec([-1] * n, 0)
    return out


def _names(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(string.ascii_lowercase[:n])
    return tuple(f"e{i}" for i in range(n))


def model_from_tables(star, F, circ, tensor, name: str = "", carrier=None) -> FiniteNModel:
    """Assemble a model whose ⊥ is the one induced by F."""
    n = len(star)
    carrier = tuple(carrier) if carrier else _names(n)
    alg = FiniteAlgebra(carrier, tuple(map(tuple, tensor)), tuple(map(tuple, circ)), tuple(star))
    F = frozenset(F)
    pairs = frozenset((x, y) for x in range(n) for y in range(n) if star[circ[x][y]] in F)
    rel = IncompatibilityRelation(pairs, frozenset(x for x in range(n) if star[x] in F), F)
    return FiniteNModel(alg, rel, name)


def _encode(n, star, circ, tensor, pairs, to_t, to_f, perm) -> tuple:
    inv = [0] * n
    for x, px in enumerate(perm):
        inv[px] = x
    rng = range(n)
    out = [perm[star[inv[i]]] for i in rng]
    out += [perm[circ[inv[i]][inv[j]]] for i in rng for j in rng]
    out += [perm[tensor[inv[i]][inv[j]]] for i in rng for j in rng]
    out += [int((inv[i], inv[j]) in pairs) for i in rng for j in rng]
    out += [int(inv[i] in to_t) for i in rng]
    out += [int(inv[i] in to_f) for i in rng]
    return tuple(out)


def canonical_form(m: FiniteNModel) -> tuple:
    """Lexicographically least encoding over all relabellings of the carrier.

    Two models are isomorphic iff their canonical forms coincide.
    """
    a, r = m.algebra, m.perp
    n = a.size
    best = None
    for perm in itertools.permutations(range(n)):
        enc = _encode(n, a.star, a.circ, a.tensor, r.pairs, r.to_true, r.to_false, perm)
        if best is None or enc < best:
            best = enc
    return (n,) + best


def seed_from_model(m: FiniteNModel, parts: Iterable[str] = ("star", "circ")) -> dict:
    """Seed dictionary pinning the named parts of ``m``."""
    a = m.algebra
    out = {}
    for p in parts:
        if p == "star":
            out["star"] = list(a.star)
        elif p in ("circ", "tensor"):
            out[p] = [list(row) for row in getattr(a, p)]
        elif p == "F":
            out["F"] = set(m.perp.to_false)
        else:
            raise ValueError(f"unknown seed part {p!r}")
    return out


class _Engine:
    """Backtracking over ∘/⊗ cells for a fixed star and designated set."""

    def __init__(self, n: int, spec: SearchSpec, on_leaf, deadline: float | None,
                 node_budget: int | None):
        self.n = n
        self.spec = spec
        self.on_leaf = on_leaf
        self.deadline = deadline
        self.node_budget = node_budget
        self.nodes = 0
        self.val = [-1] * (2 * n * n)
        cc = [[min(i, j) * n + max(i, j) for j in range(n)] for i in range(n)]
        tc = [[n * n + min(i, j) * n + max(i, j) for j in range(n)] for i in range(n)]
        self.cc, self.tc = cc, tc
        self.cells = sorted({cc[i][j] for i in range(n) for j in range(n)}) + \
            sorted({tc[i][j] for i in range(n) for j in range(n)})
        self.star = list(range(n))
        self.F = [False] * n
        self._build_templates()

    # -- ground conditions ---------------------------------------------------

    def _build_templates(self):
        n, val, cc, tc = self.n, self.val, self.cc, self.tc
        eng = self
        tags = set(self.spec.classes) | {"Nw"}

        def C(x, y):
            k = cc[x][y]
            v = val[k]
            if v < 0:
                raise _Blocked(k)
            return v

        def T(x, y):
            k = tc[x][y]
            v = val[k]
            if v < 0:
                raise _Blocked(k)
            return v

        def S(x):
            return eng.star[x]

        def D(x):  # designated
            return eng.F[x]

        def P(x, y):
            return eng.F[eng.star[C(x, y)]]

        def imp(x, y):
            return S(C(x, S(y)))

        def neq(x, y):
            return S(T(imp(x, y), imp(y, x)))

        rng = range(n)
        prs = [(x, y) for x in rng for y in rng]
        upper = [(x, y) for x in rng for y in rng if x <= y]
        triples = list(itertools.product(rng, repeat=3))
        t = []  # (name, fn, instances)

        t.append(("exchange", lambda x, y, z: C(T(x, y), z) == C(T(x, z), y),
                  [(x, y, z) for x, y, z in triples if y < z]))
        t.append(("a", lambda x: P(x, S(x)), [(x,) for x in rng]))
        t.append(("b", lambda x, y: not (P(x, S(y)) and P(y, S(x))),
                  [(x, y) for x, y in prs if x < y]))
        t.append(("e", lambda x, y: (D(x) and D(y)) == D(T(x, y)), upper))
        t.append(("f", lambda x, y: P(S(C(x, S(y))), S(C(x, y))), prs))
        t.append(("g", lambda x, y: not (D(x) and P(x, y)) or D(S(y)), prs))
        t.append(("h", lambda x, y, z: P(T(T(neq(x, y), neq(x, z)), neq(y, z)),
                                        S(imp(imp(x, y), imp(imp(y, z), imp(x, z))))), triples))
        if "N" in tags:
            t.append(("N", lambda x, y, z: T(T(x, y), z) == T(x, T(y, z)), triples))
        if n > 1 and "I" in tags:
            t.append(("I", lambda x: not P(x, x), [(x,) for x in rng]))
        if n > 1 and "I2" in tags:
            t.append(("I2", lambda x, y: not (P(x, S(y)) and P(x, y)), prs))
        if "di" in tags:
            t.append(("di", lambda x, y: not D(x) or D(S(T(S(x), S(y)))), prs))
        if "trans1" in tags:
            t.append(("trans1", lambda x, y, z: not (P(x, S(y)) and P(y, S(z))) or P(x, S(z)),
                      triples))
        if "regular" in tags:
            t.append(("regular", lambda x, y: (x != y) == D(neq(x, y)), prs))
        for h in self.spec.horn:
            fn, k = self._horn_fn(h, C, T, S, D)
            t.append((f"horn:{h.name}", fn, list(itertools.product(rng, repeat=k))))
        self.templates = t

    @staticmethod
    def _horn_fn(h: HornCondition, C, T, S, D):
        from .formula import Star, Tensor, Var
        order = sorted({v for f in (*h.premises, h.conclusion) for v in variables_of(f)})
        slot = {v: i for i, v in enumerate(order)}

        def build(g):
            if isinstance(g, Var):
                i = slot[g.name]
                return lambda vs: vs[i]
            if isinstance(g, Star):
                inner = build(g.arg)
                return lambda vs: S(inner(vs))
            left, right = build(g.left), build(g.right)
            op = T if isinstance(g, Tensor) else C
            return lambda vs: op(left(vs), right(vs))

        prem = [build(p) for p in h.premises]
        concl = build(h.conclusion)

        def fn(*vs):
            for p in prem:
                if not D(p(vs)):
                    return True
            return D(concl(vs))

        return fn, len(order)

    # -- driver --------------------------------------------------------------

    def run(self, star, F, seed_cells: Mapping[int, int]):
        n = self.n
        self.star = list(star)
        self.F = [x in F for x in range(n)]
        val = self.val
        for k in range(len(val)):
            val[k] = -1
        for k, v in seed_cells.items():
            val[k] = v
        watch: dict[int, list] = {k: [] for k in self.cells}
        for _, fn, insts in self.templates:
            for args in insts:
                try:
                    if not fn(*args):
                        return
                except _Blocked as b:
                    watch[b.cell].append((fn, args))
        order = [k for k in self.cells if val[k] < 0]
        self._watch = watch
        self._trail: list[int] = []
        self._order = order
        self._rec(0)

    def _rec(self, i: int):
        if i == len(self._order):
            self.on_leaf(self)
            return
        k = self._order[i]
        val, watch, trail = self.val, self._watch, self._trail
        ws = watch[k]
        for v in range(self.n):
            if self.node_budget is not None and self.nodes >= self.node_budget:
                raise _Stop("node budget")
            self.nodes += 1
            if self.deadline is not None and (self.nodes & 1023) == 0 \
                    and time.monotonic() > self.deadline:
                raise _Stop("time budget")
            val[k] = v
            mark = len(trail)
            ok = True
            for fn, args in ws:
                try:
                    if not fn(*args):
                        ok = False
                        break
                except _Blocked as b:
                    watch[b.cell].append((fn, args))
                    trail.append(b.cell)
            if ok:
                self._rec(i + 1)
            while len(trail) > mark:
                watch[trail.pop()].pop()
        val[k] = -1

    def tables(self):
        n, val, cc, tc = self.n, self.val, self.cc, self.tc
        circ = [[val[cc[i][j]] for j in range(n)] for i in range(n)]
        tensor = [[val[tc[i][j]] for j in range(n)] for i in range(n)]
        return circ, tensor


def _f_level_ok(n: int, star, F, tags) -> bool:
    """Class conditions that only mention F and *."""
    designated = [x in F for x in range(n)]
    to_t = [designated[star[x]] for x in range(n)]
    if "s" in tags:
        if any(designated[x] and to_t[x] for x in range(n)) and not all(designated):
            return False
    if "full" in tags:
        if not all(designated[x] or to_t[x] for x in range(n)):
            return False
    return True


def _seed_cells(n: int, seed: Mapping | None, cc, tc) -> dict[int, int]:
    out: dict[int, int] = {}
    if not seed:
        return out
    for key, ids in (("circ", cc), ("tensor", tc)):
        tab = seed.get(key)
        if tab is None:
            continue
        for i in range(n):
            for j in range(n):
                v = tab[i][j]
                if v is None:
                    continue
                k = ids[i][j]
                if out.get(k, v) != v:
                    raise ValueError(f"seeded {key} table is not commutative at ({i},{j})")
                out[k] = v
    return out


def _target_check(target):
    """Return fn(model) -> assignment dict falsifying the target, or None."""
    if target is None:
        return lambda m: None
    if isinstance(target, str):
        target = parse(target)
    if isinstance(target, HornCondition):
        prem, concl = list(target.premises), target.conclusion
    else:
        prem, concl = [], target
    order = sorted({v for f in (*prem, concl) for v in variables_of(f)})

    def check(m: FiniteNModel):
        a, F = m.algebra, m.perp.to_false
        fs = [compile_formula(a, p, order) for p in prem]
        fc = compile_formula(a, concl, order)
        for vals in itertools.product(range(a.size), repeat=len(order)):
            if all(f(vals) in F for f in fs) and fc(vals) not in F:
                return {v: a.carrier[x] for v, x in zip(order, vals)}
        return None

    return check


def _search_size(n: int, spec: SearchSpec, iso: bool, collect, result: SearchResult,
                 deadline, stop_first: bool):
    tags = set(spec.classes) | {"Nw"}
    unknown = tags - set(CLASS_TAGS)
    if unknown:
        raise ValueError(f"unknown class tags {sorted(unknown)}")
    if "trivial" in tags and n != 1:
        return
    seed = spec.seed or {}
    if seed.get("star") is not None:
        stars = [tuple(seed["star"])]
        if sorted(stars[0]) != list(range(n)) or any(stars[0][s] != i for i, s in enumerate(stars[0])):
            raise ValueError("seeded star is not an involution")
    else:
        # pinned tables are not invariant under star normalization
        pinned = seed.get("circ") is not None or seed.get("tensor") is not None
        stars = involutions(n, up_to_iso=iso and not pinned)
    if seed.get("F") is not None:
        fsets = [frozenset(seed["F"])]
    else:
        fsets = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(n), k)]
    budget = None if spec.max_nodes is None else spec.max_nodes - result.nodes
    seen = set(result.canonical)

    def leaf(eng: _Engine):
        circ, tensor = eng.tables()
        m = model_from_tables(eng.star, [x for x in range(n) if eng.F[x]], circ, tensor)
        if not collect(m):
            return
        if iso:
            cf = canonical_form(m)
            if cf in seen:
                return
            seen.add(cf)
        else:
            cf = None
        rep = validate_nmodel(m)
        assert rep.ok, f"search emitted a non-model: {rep.violations[:1]}"
        result.models.append(m)
        result.canonical.append(cf)
        if stop_first:
            raise _Stop("found")
        if spec.max_models is not None and len(result.models) >= spec.max_models:
            raise _Stop("model cap")

    eng = _Engine(n, spec, leaf, deadline, budget)
    cells = _seed_cells(n, seed, eng.cc, eng.tc)
    try:
        for star in stars:
            for F in fsets:
                if not _f_level_ok(n, star, F, tags):
                    continue
                eng.run(star, F, cells)
    finally:
        result.nodes += eng.nodes


def enumerate_models(spec: SearchSpec) -> SearchResult:
    """All models of the given carrier size in the requested classes.

    With isomorphism pruning (the default) one representative per
    isomorphism class is returned, in discovery order.
    """
    iso = True if spec.iso is None else spec.iso
    res = SearchResult()
    t0 = time.monotonic()
    deadline = None if spec.time_limit is None else t0 + spec.time_limit
    check = _target_check(spec.target)
    collect = (lambda m: True) if spec.target is None else (lambda m: check(m) is not None)
    try:
        _search_size(spec.carrier_size, spec, iso, collect, res, deadline, False)
    except _Stop as s:
        res.exhausted = False
        res.stop_reason = str(s)
    res.elapsed = time.monotonic() - t0
    return res


def find_countermodel(spec: SearchSpec) -> Countermodel:
    """Smallest model (sizes tried in increasing order) falsifying ``spec.target``."""
    if spec.target is None:
        raise ValueError("find_countermodel needs a target")
    iso = False if spec.iso is None else spec.iso
    check = _target_check(spec.target)
    t0 = time.monotonic()
    deadline = None if spec.time_limit is None else t0 + spec.time_limit
    res = SearchResult()
    done = []
    for n in range(spec.min_size, spec.carrier_size + 1):
        try:
            _search_size(n, spec, iso, lambda m: check(m) is not None, res, deadline, True)
        except _Stop as s:
            if str(s) == "found":
                m = res.models[-1]
                m = FiniteNModel(m.algebra, m.perp, f"countermodel-{n}")
                return Countermodel(m, check(m), n, res.nodes, tuple(done),
                                    time.monotonic() - t0)
            break
        done.append(n)
    return Countermodel(None, None, None, res.nodes, tuple(done), time.monotonic() - t0)
