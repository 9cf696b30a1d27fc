"""Brute-force reference implementations used to cross-check the fast code."""

import itertools

from connexive.model import (
    FiniteAlgebra, FiniteNModel, IncompatibilityRelation, validate_algebra, validate_nmodel,
)


def raw_tables(n):
    for flat in itertools.product(range(n), repeat=n * n):
        yield tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))


def naive_census(n):
    """Every labelled 𝔑w-model on range(n), by filtering all raw structures.

    Algebras are filtered first (commutativity, involution, exchange), then
    every relation ⊥ ⊆ A² ∪ A×{𝗍,𝖿} is tried against the full validator.
    """
    names = tuple("abcdefgh"[:n])
    tabs = list(raw_tables(n))
    cells = [(x, y) for x in range(n) for y in range(n)]
    out = []
    for star in itertools.product(range(n), repeat=n):
        for circ in tabs:
            for tensor in tabs:
                alg = FiniteAlgebra(names, tensor, circ, tuple(star))
                if not validate_algebra(alg).ok:
                    continue
                for bits in itertools.product((0, 1), repeat=n * n + 2 * n):
                    pairs = frozenset(c for c, b in zip(cells, bits) if b)
                    tt = frozenset(x for x in range(n) if bits[n * n + x])
                    ff = frozenset(x for x in range(n) if bits[n * n + n + x])
                    m = FiniteNModel(alg, IncompatibilityRelation(pairs, tt, ff))
                    if validate_nmodel(m).ok:
                        out.append(m)
    return out


def naive_iso_classes(models):
    """Isomorphism classes by trying every bijection directly."""
    reps = []
    for m in models:
        if not any(_isomorphic(m, r) for r in reps):
            reps.append(m)
    return reps


def _isomorphic(m1, m2):
    a, b = m1.algebra, m2.algebra
    n = a.size
    if n != b.size:
        return False
    for p in itertools.permutations(range(n)):
        if all(p[a.star[x]] == b.star[p[x]] for x in range(n)) and all(
                p[a.circ[x][y]] == b.circ[p[x]][p[y]] and p[a.tensor[x][y]] == b.tensor[p[x]][p[y]]
                for x in range(n) for y in range(n)) and {
                (p[x], p[y]) for x, y in m1.perp.pairs} == set(m2.perp.pairs) and {
                p[x] for x in m1.perp.to_true} == set(m2.perp.to_true) and {
                p[x] for x in m1.perp.to_false} == set(m2.perp.to_false):
            return True
    return False


def eval_by_names(m, f, asg):
    """Direct recursive evaluation on element names, without compiled tables."""
    from connexive.formula import Star, Tensor, Var

    a = m.algebra
    names = a.carrier

    def go(g):
        if isinstance(g, Var):
            return asg[g.name]
        if isinstance(g, Star):
            return names[a.star[names.index(go(g.arg))]]
        table = a.tensor if isinstance(g, Tensor) else a.circ
        return names[table[names.index(go(g.left))][names.index(go(g.right))]]

    return go(f)


def symmetric_census(n):
    """Labelled models on range(n) over all commutative algebras with involutive *.

    The exchange law is screened with numpy over every ⊗ table at once; the
    surviving algebras are then tried with each designated set F (⊥ induced
    by F) against the full validator, after a cheap screen on (a) and (e).
    """
    import numpy as np

    upper = [(i, j) for i in range(n) for j in range(i, n)]
    flats = np.array(list(itertools.product(range(n), repeat=len(upper))), dtype=np.int64)
    tabs = np.zeros((len(flats), n, n), dtype=np.int64)
    for k, (i, j) in enumerate(upper):
        tabs[:, i, j] = flats[:, k]
        tabs[:, j, i] = flats[:, k]
    stars = [s for s in itertools.product(range(n), repeat=n)
             if all(s[s[x]] == x for x in range(n))]
    names = tuple("abcdefgh"[:n])
    z = np.arange(n)
    out = []
    for circ in tabs:
        # lhs[k,x,y,z] = circ[t_k[x][y]][z]
        lhs = circ[tabs[:, :, :, None], z[None, None, None, :]]
        ok = np.all(lhs == lhs.transpose(0, 1, 3, 2), axis=(1, 2, 3))
        for tensor in tabs[ok]:
            for star in stars:
                alg = FiniteAlgebra(names, tuple(map(tuple, tensor.tolist())),
                                    tuple(map(tuple, circ.tolist())), tuple(star))
                for bits in itertools.product((0, 1), repeat=n):
                    F = frozenset(x for x in range(n) if bits[x])
                    # cheap necessary conditions (a) and (e) before the full check
                    if any(star[alg.circ[x][star[x]]] not in F for x in range(n)):
                        continue
                    if any((x in F and y in F) != (alg.tensor[x][y] in F)
                           for x in range(n) for y in range(n)):
                        continue
                    pairs = frozenset((x, y) for x in range(n) for y in range(n)
                                      if star[alg.circ[x][y]] in F)
                    rel = IncompatibilityRelation(pairs, frozenset(x for x in range(n) if star[x] in F), F)
                    m = FiniteNModel(alg, rel)
                    if validate_nmodel(m).ok:
                        out.append(m)
    return out
