"""Exact generalized exponential polynomials on Z^d and decompositions of f(x_1 + ... + x_n)."""

from .algebra import (
    Exponential,
    ExpPoly,
    MultiExpPoly,
    canonicalize,
    degree,
    evaluate,
    generic_combination,
    spectrum,
    translate,
)
from .decompose import (
    DecompWitness,
    decompose_first_block,
    decompose_sum,
    find_separated_pair,
    monom_split,
    pad_witness,
    restrict_witness,
    verify_witness,
)
from .diffops import DiffOpWord, OpFactor, annihilator_for, apply_word, delta, mdelta
from .gridlab import (
    GridBox,
    GridFunction,
    exponentials_in_span,
    min_order_bounds,
    reconstruct_gep,
    refute_order2,
    sample,
    sum_rank,
)
from .poly import GenPoly
from .scalar import Scalar
from .textio import format_expoly, parse_expr

__version__ = "0.1.0"
