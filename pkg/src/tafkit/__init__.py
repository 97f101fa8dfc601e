"""Trichotomic argumentation frameworks under Łukasiewicz fuzzy semantics.

Logos (attack/support schemes), ethos (trust between entities) and pathos
(commitment weights) evaluated over a finite truth grid, with Dung's
abstract argumentation as the crisp special case.
"""
from importlib import resources

from .fuzzy import (TruthGrid, TruthValue, big_and, big_or, luk_and, luk_iff, luk_implies,
                    luk_neg, luk_or)
from .model import (TAF, BeliefPredicate, ComplexSchemeApplication, Proposition, Scheme,
                    SchemeApplication, builtin_scheme, compose, enumerate_complex,
                    monotonicity_degree, validate)
from .semantics import EvalContext, Labelling, best_labellings

__version__ = "0.1.0"


def fixture_path(name: str = "brexit.json"):
    """Path of a bundled example file (the Brexit discussion graph by default)."""
    return resources.files(__package__).joinpath("data", name)
