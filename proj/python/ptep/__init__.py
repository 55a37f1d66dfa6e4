"""Exceptional points of PT-symmetric subwavelength resonator arrays."""

from ._core import (
    EpSolution,
    char_poly,
    coalescence_exponent,
    continue_family,
    dilute_matrix,
    eigenvalues,
    find_eps,
    frequencies,
    refine_full,
    residual,
    split,
    sweep,
    verify,
)

__all__ = [
    "EpSolution",
    "char_poly",
    "coalescence_exponent",
    "continue_family",
    "dilute_matrix",
    "eigenvalues",
    "find_eps",
    "frequencies",
    "refine_full",
    "residual",
    "split",
    "sweep",
    "verify",
]
