"""Exact arithmetic over Q: polynomials, rational functions, roots, reconstruction."""
from .poly import (
    Poly,
    Rat,
    RatFun,
    as_rat,
    discriminant,
    is_squarefree_poly,
    poly_gcd,
    poly_gcd_many,
    poly_lcm,
    resultant,
    squarefree_poly,
)
from .bipoly import (
    BiPoly,
    bipoly_divide,
    bipoly_gcd,
    bipoly_gcd_many,
    divides,
    resultant_in_s,
    squarefree_part,
)
from .roots import (
    RootInterval,
    count_real_roots,
    has_root_in,
    isolate_real_roots,
    rational_roots,
    simplest_between,
)
from .interp import interpolate, pade, ratfun_reconstruct, rational_reconstruct

__all__ = [
    "BiPoly",
    "Poly",
    "Rat",
    "RatFun",
    "RootInterval",
    "as_rat",
    "bipoly_divide",
    "bipoly_gcd",
    "bipoly_gcd_many",
    "count_real_roots",
    "discriminant",
    "divides",
    "has_root_in",
    "interpolate",
    "is_squarefree_poly",
    "isolate_real_roots",
    "pade",
    "poly_gcd",
    "poly_gcd_many",
    "poly_lcm",
    "ratfun_reconstruct",
    "rational_reconstruct",
    "rational_roots",
    "resultant",
    "resultant_in_s",
    "simplest_between",
    "squarefree_part",
    "squarefree_poly",
]
