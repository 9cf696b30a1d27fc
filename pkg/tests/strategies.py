"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from connexive.formula import Circ, Star, Tensor, Var

VARS = ("p", "q", "r", "s")

variables = st.sampled_from(VARS).map(Var)

formulas = st.recursive(
    variables,
    lambda sub: st.one_of(
        sub.map(Star),
        st.tuples(sub, sub).map(lambda t: Tensor(*t)),
        st.tuples(sub, sub).map(lambda t: Circ(*t)),
    ),
    max_leaves=12,
)


def assignments(carrier):
    return st.fixed_dictionaries({v: st.sampled_from(carrier) for v in VARS})
