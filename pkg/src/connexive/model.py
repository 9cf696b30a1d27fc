"""Finite algebraic-relational models.

A model is a finite algebra (⊗, ∘, *) together with an incompatibility
relation ⊥ on the carrier extended by two reserved constants 𝗍 and 𝖿.
Pairs involving a constant are stored with the constant on the right.
Elements are dense integer indices internally; names only appear at the
edges (JSON, reports, public lookups).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .formula import Formula, Star, Tensor, Var, parse, variables_of

__all__ = [
    "TRUE", "FALSE", "CLASS_TAGS", "ModelError",
    "FiniteAlgebra", "IncompatibilityRelation", "FiniteNModel",
    "Violation", "Report", "Outcome", "HornCondition", "RULE_CONDITIONS",
    "validate_algebra", "validate_nmodel", "class_check", "class_witness",
    "evaluate", "holds", "consequence", "check_horn", "designated",
    "compile_formula", "model_from_dict", "model_to_dict", "load_model",
]

TRUE = "@t"
FALSE = "@f"

CLASS_TAGS = ("Nw", "N", "I", "I2", "s", "di", "trans1", "regular", "full", "trivial")


class ModelError(ValueError):
    """Malformed model data (bad table entries, reserved names, unknown elements)."""


@dataclass(frozen=True)
class FiniteAlgebra:
    carrier: tuple[str, ...]
    tensor: tuple[tuple[int, ...], ...]
    circ: tuple[tuple[int, ...], ...]
    star: tuple[int, ...]

    def __post_init__(self):
        n = len(self.carrier)
        if n < 1:
            raise ModelError("carrier must be non-empty")
        if len(set(self.carrier)) != n:
            raise ModelError("duplicate element names")
        for name in self.carrier:
            if name in (TRUE, FALSE):
                raise ModelError(f"reserved token {name!r} used as an element")
        for label, table in (("tensor", self.tensor), ("circ", self.circ)):
            if len(table) != n or any(len(row) != n for row in table):
                raise ModelError(f"{label} table is not {n}x{n}")
            for row in table:
                for v in row:
                    if not (isinstance(v, int) and 0 <= v < n):
                        raise ModelError(f"{label} entry {v!r} is not a carrier index")
        if len(self.star) != n or any(not (isinstance(v, int) and 0 <= v < n) for v in self.star):
            raise ModelError("star is not an n-vector of carrier indices")

    @property
    def size(self) -> int:
        return len(self.carrier)

    def index(self, name) -> int:
        if isinstance(name, int):
            if 0 <= name < self.size:
                return name
            raise ModelError(f"element index {name} out of range")
        try:
            return self.carrier.index(name)
        except ValueError:
            raise ModelError(f"unknown element {name!r}") from None

    @classmethod
    def from_names(cls, carrier: Sequence[str], tensor, circ, star) -> "FiniteAlgebra":
        """Build from tables written with element names (rows in carrier order)."""
        carrier = tuple(carrier)
        pos = {name: i for i, name in enumerate(carrier)}

        def idx(v):
            if v not in pos:
                raise ModelError(f"unknown element {v!r} in table")
            return pos[v]

        def table(rows):
            return tuple(tuple(idx(v) for v in (row.split() if isinstance(row, str) else row))
                         for row in rows)

        star_seq = star.split() if isinstance(star, str) else star
        return cls(carrier, table(tensor), table(circ), tuple(idx(v) for v in star_seq))

    def imp(self, x: int, y: int) -> int:
        return self.star[self.circ[x][self.star[y]]]

    def oplus(self, x: int, y: int) -> int:
        s = self.star
        return s[self.tensor[s[x]][s[y]]]

    def neq(self, x: int, y: int) -> int:
        return self.star[self.tensor[self.imp(x, y)][self.imp(y, x)]]


@dataclass(frozen=True)
class IncompatibilityRelation:
    """⊥ as carrier pairs plus the elements incompatible with 𝗍 and with 𝖿."""

    pairs: frozenset[tuple[int, int]]
    to_true: frozenset[int]
    to_false: frozenset[int]

    def perp(self, x: int, y: int) -> bool:
        return (x, y) in self.pairs


@dataclass(frozen=True)
class FiniteNModel:
    algebra: FiniteAlgebra
    perp: IncompatibilityRelation
    name: str = ""
    declared_classes: frozenset[str] = field(default_factory=frozenset)

    @property
    def size(self) -> int:
        return self.algebra.size

    @property
    def carrier(self) -> tuple[str, ...]:
        return self.algebra.carrier

    @classmethod
    def from_names(cls, name, carrier, tensor, circ, star, incompat, declared=()):
        """``incompat`` is an iterable of name pairs; constants are ``@t``/``@f``."""
        alg = FiniteAlgebra.from_names(carrier, tensor, circ, star)
        pairs, to_t, to_f = set(), set(), set()
        for left, right in incompat:
            if left in (TRUE, FALSE):
                raise ModelError(f"constant {left!r} in left coordinate of ⊥")
            x = alg.index(left)
            if right == TRUE:
                to_t.add(x)
            elif right == FALSE:
                to_f.add(x)
            else:
                pairs.add((x, alg.index(right)))
        rel = IncompatibilityRelation(frozenset(pairs), frozenset(to_t), frozenset(to_f))
        return cls(alg, rel, name, frozenset(declared))


@dataclass(frozen=True)
class Violation:
    condition: str
    witness: tuple

    def __str__(self):
        return f"{self.condition}: {self.witness}"


@dataclass
class Report:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def failed_conditions(self) -> list[str]:
        return sorted({v.condition for v in self.violations})


@dataclass(frozen=True)
class Outcome:
    """Boolean verdict carrying a counterexample assignment when false."""

    ok: bool
    witness: dict | None = None

    def __bool__(self):
        return self.ok


# -- algebra and model validation ------------------------------------------

def validate_algebra(a: FiniteAlgebra, require_assoc: bool = False) -> Report:
    """Commutativity of ⊗ and ∘, involutive *, exchange, optional ⊗-associativity."""
    n, t, c, s = a.size, a.tensor, a.circ, a.star
    names = a.carrier
    rep = Report()
    for x, y in itertools.combinations(range(n), 2):
        if t[x][y] != t[y][x]:
            rep.violations.append(Violation("tensor-commutative", (names[x], names[y])))
        if c[x][y] != c[y][x]:
            rep.violations.append(Violation("circ-commutative", (names[x], names[y])))
    for x in range(n):
        if s[s[x]] != x:
            rep.violations.append(Violation("involution", (names[x],)))
    for x, y, z in itertools.product(range(n), repeat=3):
        if c[t[x][y]][z] != c[t[x][z]][y]:
            rep.violations.append(Violation("exchange", (names[x], names[y], names[z])))
        if require_assoc and t[t[x][y]][z] != t[x][t[y][z]]:
            rep.violations.append(Violation("tensor-associative", (names[x], names[y], names[z])))
    return rep


def validate_nmodel(m: FiniteNModel) -> Report:
    """Check the algebra plus the incompatibility conditions (a)–(h) and ⊥-symmetry.

    Every violated instance is listed with element names.
    """
    a = m.algebra
    rep = validate_algebra(a)
    n, t, c, s = a.size, a.tensor, a.circ, a.star
    P, T, F = m.perp.pairs, m.perp.to_true, m.perp.to_false
    names = a.carrier
    imp = a.imp

    def bad(cond, *xs):
        rep.violations.append(Violation(cond, tuple(names[x] for x in xs)))

    for x in range(n):
        if (x, s[x]) not in P:
            bad("a", x)
        if (x in T) != (s[x] in F):
            bad("d", x)
    for x, y in itertools.product(range(n), repeat=2):
        pxy = (x, y) in P
        if x != y and (x, s[y]) in P and (y, s[x]) in P:
            bad("b", x, y)
        if pxy != (c[x][y] in T):
            bad("c", x, y)
        if ((x in F and y in F) != (t[x][y] in F)):
            bad("e", x, y)
        if (s[c[x][s[y]]], s[c[x][y]]) not in P:
            bad("f", x, y)
        if pxy and x in F and y not in T:
            bad("g", x, y)
        if pxy and (y, x) not in P:
            bad("symmetry", x, y)
    for x, y, z in itertools.product(range(n), repeat=3):
        lhs = t[t[a.neq(x, y)][a.neq(x, z)]][a.neq(y, z)]
        rhs = imp(imp(x, y), imp(imp(y, z), imp(x, z)))
        if (lhs, s[rhs]) not in P:
            bad("h", x, y, z)
    return rep


# -- formula evaluation ----------------------------------------------------

def compile_formula(a: FiniteAlgebra, f: Formula, order: Sequence[str]) -> Callable[[Sequence[int]], int]:
    """Compile ``f`` into a function of a value tuple aligned with ``order``."""
    slot = {v: i for i, v in enumerate(order)}
    t, c, s = a.tensor, a.circ, a.star

    def build(g):
        if isinstance(g, Var):
            if g.name not in slot:
                raise ModelError(f"unassigned variable {g.name!r}")
            i = slot[g.name]
            return lambda vals: vals[i]
        if isinstance(g, Star):
            inner = build(g.arg)
            return lambda vals: s[inner(vals)]
        left, right = build(g.left), build(g.right)
        table = t if isinstance(g, Tensor) else c
        return lambda vals: table[left(vals)][right(vals)]

    return build(f)


def _as_formula(f) -> Formula:
    return parse(f) if isinstance(f, str) else f


def evaluate(m: FiniteNModel | FiniteAlgebra, f, asgn: Mapping[str, object]) -> str:
    """Value of ``f`` under a variable assignment (element names or indices)."""
    a = m.algebra if isinstance(m, FiniteNModel) else m
    f = _as_formula(f)
    order = variables_of(f)
    missing = [v for v in order if v not in asgn]
    if missing:
        raise ModelError(f"unassigned variable {missing[0]!r}")
    fn = compile_formula(a, f, order)
    return a.carrier[fn([a.index(asgn[v]) for v in order])]


def _counterexample(m: FiniteNModel, premises: Sequence[Formula], concl: Formula) -> dict | None:
    a = m.algebra
    order: list[str] = []
    for g in [*premises, concl]:
        for v in variables_of(g):
            if v not in order:
                order.append(v)
    F = m.perp.to_false
    prem_fns = [compile_formula(a, g, order) for g in premises]
    concl_fn = compile_formula(a, concl, order)
    for vals in itertools.product(range(a.size), repeat=len(order)):
        if all(p(vals) in F for p in prem_fns) and concl_fn(vals) not in F:
            return {v: a.carrier[x] for v, x in zip(order, vals)}
    return None


def holds(m: FiniteNModel, f) -> Outcome:
    """M ⊨ f: every assignment sends f into the designated set."""
    w = _counterexample(m, [], _as_formula(f))
    return Outcome(w is None, w)


def consequence(m: FiniteNModel, gamma: Iterable, f) -> Outcome:
    """Every assignment designating all of ``gamma`` designates ``f``."""
    w = _counterexample(m, [_as_formula(g) for g in gamma], _as_formula(f))
    return Outcome(w is None, w)


@dataclass(frozen=True)
class HornCondition:
    """Universally quantified 'all premises ⊥ 𝖿 imply conclusion ⊥ 𝖿'."""

    premises: tuple[Formula, ...]
    conclusion: Formula
    name: str = ""

    @classmethod
    def of(cls, premises: Iterable, conclusion, name: str = "") -> "HornCondition":
        return cls(tuple(_as_formula(p) for p in premises), _as_formula(conclusion), name)


RULE_CONDITIONS = {
    "I": HornCondition.of(["p => p*"], "q", "I"),
    "I2": HornCondition.of(["p => q", "p => q*"], "r", "I2"),
    "ECQ": HornCondition.of(["p", "p*"], "q", "ECQ"),
    "A8": HornCondition.of(["p => q", "q => r"], "p => r", "A8"),
    "DI": HornCondition.of(["p"], "p (+) q", "DI"),
}


def check_horn(m: FiniteNModel, cond: HornCondition) -> Outcome:
    return consequence(m, cond.premises, cond.conclusion)


def designated(m: FiniteNModel) -> frozenset[str]:
    return frozenset(m.carrier[x] for x in m.perp.to_false)


# -- class membership ------------------------------------------------------

def class_witness(m: FiniteNModel, tag: str):
    """Return None when ``m`` belongs to the class, else a witness tuple of names.

    Conditions whose conclusion is an identity x ≈ y are read as forcing the
    whole carrier down to one element.
    """
    a = m.algebra
    n, t, s = a.size, a.tensor, a.star
    P, T, F = m.perp.pairs, m.perp.to_true, m.perp.to_false
    names = a.carrier
    trivial = n == 1
    rng = range(n)

    if tag == "Nw":
        rep = validate_nmodel(m)
        return None if rep.ok else tuple(str(v) for v in rep.violations[:1])
    if tag == "N":
        for x, y, z in itertools.product(rng, repeat=3):
            if t[t[x][y]][z] != t[x][t[y][z]]:
                return (names[x], names[y], names[z])
        return None
    if tag == "trivial":
        return None if trivial else (names[0], names[1])
    if tag == "I":
        for x in rng:
            if (x, x) in P and not trivial:
                return (names[x],)
        return None
    if tag == "I2":
        for x, y in itertools.product(rng, repeat=2):
            if (x, s[y]) in P and (x, y) in P and not trivial:
                return (names[x], names[y])
        return None
    if tag == "s":
        for x in rng:
            if x in T and x in F:
                for z in rng:
                    if z not in F:
                        return (names[x], names[z])
        return None
    if tag == "di":
        for x in sorted(F):
            for y in rng:
                if a.oplus(x, y) not in F:
                    return (names[x], names[y])
        return None
    if tag == "trans1":
        for x, y, z in itertools.product(rng, repeat=3):
            if (x, s[y]) in P and (y, s[z]) in P and (x, s[z]) not in P:
                return (names[x], names[y], names[z])
        return None
    if tag == "regular":
        for x, y in itertools.product(rng, repeat=2):
            if (x != y) != (a.neq(x, y) in F):
                return (names[x], names[y])
        return None
    if tag == "full":
        for x in rng:
            if x not in F and x not in T:
                return (names[x],)
        return None
    raise ValueError(f"unknown class tag {tag!r}")


def class_check(m: FiniteNModel, tag: str) -> bool:
    return class_witness(m, tag) is None


# -- JSON ------------------------------------------------------------------

def model_to_dict(m: FiniteNModel) -> dict:
    a = m.algebra
    nm = a.carrier
    incompat = [[nm[x], nm[y]] for x, y in sorted(m.perp.pairs)]
    incompat += [[nm[x], TRUE] for x in sorted(m.perp.to_true)]
    incompat += [[nm[x], FALSE] for x in sorted(m.perp.to_false)]
    return {
        "name": m.name,
        "carrier": list(nm),
        "tensor": [[nm[v] for v in row] for row in a.tensor],
        "circ": [[nm[v] for v in row] for row in a.circ],
        "star": [nm[v] for v in a.star],
        "incompat": incompat,
        "declared_classes": sorted(m.declared_classes),
    }


def model_from_dict(d: Mapping) -> FiniteNModel:
    try:
        return FiniteNModel.from_names(
            d.get("name", ""), d["carrier"], d["tensor"], d["circ"], d["star"],
            [tuple(p) for p in d.get("incompat", [])], d.get("declared_classes", ()),
        )
    except KeyError as e:
        raise ModelError(f"model file lacks field {e.args[0]!r}") from None
    except (TypeError, AttributeError) as e:
        raise ModelError(f"malformed model file: {e}") from None


def load_model(path) -> FiniteNModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
