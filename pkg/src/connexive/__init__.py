"""Connexive logics over incompatibility models: formulas, Hilbert-style proof
checking, finite models, logical matrices, induced orders and model search."""

from .formula import Formula, ParseError, parse, render
from .model import FiniteNModel, evaluate, holds, consequence, validate_nmodel
from .calculus import Proof, check_proof, get_system
from .corpus import models as corpus_models

__version__ = "0.1.0"

__all__ = [
    "Formula", "ParseError", "parse", "render", "FiniteNModel", "evaluate", "holds",
    "consequence", "validate_nmodel", "Proof", "check_proof", "get_system", "corpus_models",
    "__version__",
]
