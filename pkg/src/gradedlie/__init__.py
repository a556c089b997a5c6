"""Graded nilpotent Lie algebras over F_p of class at most 3."""
from __future__ import annotations

from .algebra import PresentedAlgebra, Presentation, generated_subalgebra, materialize, quotient, subalgebra
from .amalgam import divisor_extend, free_adjoin_point, free_amalgam, functor_F, gamma, strong_amalgam
from .bch import GroupView, group_view, solve_recovery_coefficients
from .fplinalg import EnumerationTooLarge, PrimeField, Subspace
from .freelie import build_free_algebra, witt_dims
from .generic import build_generic, replay, standard_catalog
from .glaformat import fingerprint, load_algebra, parse_algebra, print_algebra
from .predim import delta, is_strong, kc_membership

__version__ = "0.1.0"

__all__ = [
    "EnumerationTooLarge", "GroupView", "Presentation", "PresentedAlgebra", "PrimeField", "Subspace",
    "build_free_algebra", "build_generic", "delta", "divisor_extend", "fingerprint", "free_adjoin_point",
    "free_amalgam", "functor_F", "gamma", "generated_subalgebra", "group_view", "is_strong",
    "kc_membership", "load_algebra", "materialize", "parse_algebra", "print_algebra", "quotient",
    "replay", "solve_recovery_coefficients", "standard_catalog", "strong_amalgam", "subalgebra",
    "witt_dims",
]
