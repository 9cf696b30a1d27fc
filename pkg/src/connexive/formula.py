"""Formulas over the language {⊗, ∘, *}.

Only the three primitives are stored.  Entailment, equivalence, the
factual disjunction and the material hook are abbreviations that are
expanded as soon as they are built or parsed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

__all__ = [
    "Var", "Tensor", "Circ", "Star", "Formula", "ParseError", "PathError",
    "parse", "render", "substitute", "replace_at", "left_chain",
    "subterm_at", "positions", "variables_of", "size",
    "imp", "eqv", "neq", "neq3", "oplus", "hook", "lsum",
    "match_imp", "match_eqv", "match_oplus",
]


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Tensor:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Circ:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class Star:
    arg: "Formula"

    def __str__(self) -> str:
        return render(self)


Formula = Union[Var, Tensor, Circ, Star]
Path = tuple[int, ...]


# -- derived connectives ---------------------------------------------------

def imp(a: Formula, b: Formula) -> Formula:
    """a ⇒ b := (a ∘ b*)*"""
    return Star(Circ(a, Star(b)))


def eqv(a: Formula, b: Formula) -> Formula:
    return Tensor(imp(a, b), imp(b, a))


def neq(a: Formula, b: Formula) -> Formula:
    return Star(eqv(a, b))


def neq3(a: Formula, b: Formula, c: Formula) -> Formula:
    # associated to the left: ((a⇎b) ⊗ (a⇎c)) ⊗ (b⇎c)
    return Tensor(Tensor(neq(a, b), neq(a, c)), neq(b, c))


def oplus(a: Formula, b: Formula) -> Formula:
    """a ⊕ b := (a* ⊗ b*)*"""
    return Star(Tensor(Star(a), Star(b)))


def hook(a: Formula, b: Formula) -> Formula:
    """a ⊃ b := a* ⊕ b"""
    return oplus(Star(a), b)


def lsum(a: Formula, b: Formula) -> Formula:
    """Intensional logical sum a* ⇒ b.  No surface syntax."""
    return imp(Star(a), b)


def match_imp(f: Formula) -> tuple[Formula, Formula] | None:
    if isinstance(f, Star) and isinstance(f.arg, Circ) and isinstance(f.arg.right, Star):
        return f.arg.left, f.arg.right.arg
    return None


def match_eqv(f: Formula) -> tuple[Formula, Formula] | None:
    if not isinstance(f, Tensor):
        return None
    lhs, rhs = match_imp(f.left), match_imp(f.right)
    if lhs is None or rhs is None or lhs != (rhs[1], rhs[0]):
        return None
    return lhs


def match_oplus(f: Formula) -> tuple[Formula, Formula] | None:
    if (isinstance(f, Star) and isinstance(f.arg, Tensor)
            and isinstance(f.arg.left, Star) and isinstance(f.arg.right, Star)):
        return f.arg.left.arg, f.arg.right.arg
    return None


# -- structural operations -------------------------------------------------

def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Var):
        return ()
    if isinstance(f, Star):
        return (f.arg,)
    return (f.left, f.right)


def rebuild(f: Formula, kids: Sequence[Formula]) -> Formula:
    if isinstance(f, Star):
        return Star(kids[0])
    if isinstance(f, Tensor):
        return Tensor(kids[0], kids[1])
    if isinstance(f, Circ):
        return Circ(kids[0], kids[1])
    return f


def size(f: Formula) -> int:
    return 1 + sum(size(c) for c in children(f))


def variables_of(f: Formula) -> list[str]:
    """Variable names in order of first occurrence."""
    seen: dict[str, None] = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            seen.setdefault(g.name)
        else:
            stack.extend(reversed(children(g)))
    return list(seen)


def substitute(f: Formula, sigma: Mapping[str, Formula]) -> Formula:
    """Simultaneous uniform substitution of variables."""
    if isinstance(f, Var):
        return sigma.get(f.name, f)
    return rebuild(f, [substitute(c, sigma) for c in children(f)])


def positions(f: Formula, path: Path = ()) -> Iterator[tuple[Path, Formula]]:
    """All (path, subterm) pairs in preorder."""
    yield path, f
    for i, c in enumerate(children(f)):
        yield from positions(c, path + (i,))


class PathError(ValueError):
    pass


def subterm_at(f: Formula, path: Sequence[int]) -> Formula:
    g = f
    for depth, i in enumerate(path):
        kids = children(g)
        if not 0 <= i < len(kids):
            raise PathError(f"invalid path {list(path)}: no child {i} at depth {depth}")
        g = kids[i]
    return g


def _replace_one(f: Formula, path: Sequence[int], new: Formula) -> Formula:
    if not path:
        return new
    kids = list(children(f))
    kids[path[0]] = _replace_one(kids[path[0]], path[1:], new)
    return rebuild(f, kids)


def replace_at(f: Formula, paths, replacement: Formula) -> Formula:
    """Replace the subterms addressed by ``paths`` with ``replacement``.

    All addressed subterms must be syntactically equal.  Nested paths are
    rejected since replacing the outer occurrence would remove the inner one.
    """
    paths = [tuple(p) for p in paths]
    if not paths:
        raise PathError("no paths given")
    targets = {subterm_at(f, p) for p in paths}
    if len(targets) != 1:
        raise PathError("addressed subterms are not all equal")
    for p in paths:
        for q in paths:
            if p != q and q[:len(p)] == p:
                raise PathError(f"overlapping paths {list(p)} and {list(q)}")
    for p in sorted(set(paths)):
        f = _replace_one(f, p, replacement)
    return f


def left_chain(fs: Sequence[Formula]) -> Formula:
    """((f1 ⊗ f2) ⊗ f3) ⊗ ..."""
    if not fs:
        raise ValueError("left_chain of an empty list")
    acc = fs[0]
    for g in fs[1:]:
        acc = Tensor(acc, g)
    return acc


# -- parsing ---------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.offset = len(text[:pos].encode("utf-8"))
        super().__init__(f"{message} at byte {self.offset}")


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<neq>=/=|⇎)
  | (?P<eqv><=>|⇔)
  | (?P<imp>=>|⇒)
  | (?P<hook>->|⊃)
  | (?P<oplus>\(\+\)|⊕)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<star>\*)
  | (?P<tensor>&|⊗)
  | (?P<circ>∘)
  | (?P<ident>[a-zα-ω][a-z0-9_α-ω]*)
""", re.VERBOSE)

_BINARY = {
    "tensor": Tensor,
    "circ": Circ,
    "imp": imp,
    "eqv": eqv,
    "oplus": oplus,
    "hook": hook,
    "neq": neq,
}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unknown token {text[pos]!r}", text, pos)
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def operator(self):
        kind, value, pos = self.peek()
        # inside a binary application a bare `o` is the circ operator
        if kind == "circ" or (kind == "ident" and value == "o"):
            self.take()
            return "circ"
        if kind in _BINARY:
            self.take()
            return kind
        return None

    def binary_tail(self, left: Formula) -> Formula:
        op = self.operator()
        if op is None:
            self.fail("expected a binary connective")
        right = self.unary()
        if op == "neq" and self.peek()[0] == "neq":
            self.take()
            third = self.unary()
            return neq3(left, right, third)
        return _BINARY[op](left, right)

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "ident":
            self.take()
            f: Formula = Var(value)
        elif kind == "lp":
            open_tok = self.take()
            inner = self.unary()
            if self.peek()[0] != "rp":
                inner = self.binary_tail(inner)
            if self.peek()[0] != "rp":
                if self.peek()[0] == "eof":
                    self.fail("unbalanced parentheses", open_tok)
                self.fail("expected ')'")
            self.take()
            f = inner
        elif kind == "rp":
            self.fail("unbalanced parentheses")
        elif kind == "eof":
            self.fail("unexpected end of input")
        else:
            self.fail(f"unexpected {value!r}")
        while self.peek()[0] == "star":
            self.take()
            f = Star(f)
        return f

    def top(self) -> Formula:
        f = self.unary()
        if self.peek()[0] != "eof":
            f = self.binary_tail(f)
        if self.peek()[0] != "eof":
            kind = self.peek()[0]
            self.fail("unbalanced parentheses" if kind == "rp"
                      else "binary applications must be parenthesized")
        return f


def parse(text: str) -> Formula:
    """Parse ASCII (or Unicode) formula syntax; derived connectives are expanded.

    >>> parse("p => q")
    Star(arg=Circ(left=Var(name='p'), right=Star(arg=Var(name='q'))))
    """
    return _Parser(text).top()


# -- rendering -------------------------------------------------------------

def render(f: Formula, style: str = "primitive") -> str:
    """Print ``f`` in ASCII.  ``sugared`` folds ⇒, ⇔, ⇎ and ⊕ back in."""
    if style not in ("primitive", "sugared"):
        raise ValueError(f"unknown style {style!r}")
    return _render(f, style == "sugared")


def _render(f: Formula, sugar: bool) -> str:
    if sugar:
        if isinstance(f, Star):
            pair = match_eqv(f.arg)
            if pair is not None:
                return f"({_render(pair[0], True)} =/= {_render(pair[1], True)})"
        pair = match_eqv(f)
        if pair is not None:
            return f"({_render(pair[0], True)} <=> {_render(pair[1], True)})"
        pair = match_imp(f)
        if pair is not None:
            return f"({_render(pair[0], True)} => {_render(pair[1], True)})"
        pair = match_oplus(f)
        if pair is not None:
            return f"({_render(pair[0], True)} (+) {_render(pair[1], True)})"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Star):
        return _render(f.arg, sugar) + "*"
    op = "&" if isinstance(f, Tensor) else "o"
    return f"({_render(f.left, sugar)} {op} {_render(f.right, sugar)})"
