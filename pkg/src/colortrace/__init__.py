"""colortrace: exact decomposition of Lie-algebra generator traces into
symmetrized traces and structure-constant chains, with free-algebra,
brute-force and numerical matrix oracles."""

from .words import (
    Word,
    EMPTY_WORD,
    shuffle,
    shuffle_many,
    scalar_product,
    deshuffle,
    descent_number,
    c_coefficient,
    is_lyndon,
    standard_factorization,
)
from .gaussian import GaussianRational, as_gaussian, i_power
from .freelie import (
    eulerian_idempotent,
    lie_to_words,
    left_bracketing,
    nc_multiply,
    nc_add,
    nc_scale,
)
from .colorexpr import (
    ColorExpr,
    ColorTerm,
    ZERO_EXPR,
    d,
    f,
    delta,
    term,
    expr,
    expr_add,
    expr_mul,
    expr_scale,
    canonicalize,
    reduce_two_index_d,
    f_chain,
    eulerian_coefficients,
    eulerian_coefficients_from_brackets,
    free_letters,
    assert_valid,
)
from .engine import (
    EFormTerm,
    EFormExpansion,
    decompose_eform,
    expand_eform,
    closed_formula_terms,
    decompose_closed,
    solomon_projection,
    oracle_commutation,
    term_count,
)
from .numeric import (
    MatrixAlgebra,
    build_algebra,
    structure_constants,
    symmetric_trace,
    direct_trace,
    evaluate,
    evaluate_many,
)

__all__ = [name for name in dir() if not name.startswith("_")]
