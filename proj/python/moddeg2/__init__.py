"""Parity of elliptic-curve modular degrees via mod-2 Hecke algebras."""

from _moddeg2 import (
    ap,
    curve_info,
    factor,
    genus_x0,
    is_prime,
    local_factors,
    merel_criterion,
    neumann_setzer_test,
    parity,
    rank_parity,
    represent_u2_plus_16v2,
    space_info,
    theorem_one_filter,
    two_division_field,
)

__all__ = [
    "ap",
    "curve_info",
    "factor",
    "genus_x0",
    "is_prime",
    "local_factors",
    "merel_criterion",
    "neumann_setzer_test",
    "parity",
    "rank_parity",
    "represent_u2_plus_16v2",
    "space_info",
    "theorem_one_filter",
    "two_division_field",
]
