"""Proof kernel and proof transformers for an infinitary sequent calculus of pseudocomplemented meets."""

from . import admissible  # noqa: F401  registers the recipe kinds
from .admissible import (
    cut,
    cut_zeta,
    derive_complete_induction,
    derive_dne,
    derive_prime_dne,
    invert_meet_right,
    invert_neg,
    invert_omega,
    refl,
    substitute_freevar,
    weaken_right,
)
from .derivation import Derivation, OmegaBranch, Recipe, check, instantiate
from .terms import All, Meet, Neg, Prime, Sequent, arithmetic_oracle, finite_preorder, valuation_oracle

__all__ = [
    "All",
    "Derivation",
    "Meet",
    "Neg",
    "OmegaBranch",
    "Prime",
    "Recipe",
    "Sequent",
    "arithmetic_oracle",
    "check",
    "cut",
    "cut_zeta",
    "derive_complete_induction",
    "derive_dne",
    "derive_prime_dne",
    "finite_preorder",
    "instantiate",
    "invert_meet_right",
    "invert_neg",
    "invert_omega",
    "refl",
    "substitute_freevar",
    "valuation_oracle",
    "weaken_right",
]
