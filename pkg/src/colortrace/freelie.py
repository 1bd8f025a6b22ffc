"""Free Lie algebra over abstract generators.

Lie polynomials are stored in the left-nested commutator basis: the
monomial on letters (p1, ..., pn) means [...[[p1, p2], p3]..., pn] and is
keyed by its letter word.  This module provides the Eulerian (Solomon)
idempotent in that basis, expansion of Lie polynomials into the free
associative algebra, and the concatenation product there.

``LiePolynomial`` and ``NcPolynomial`` are both plain dictionaries from
``Word`` to ``GaussianRational``; zero coefficients are never stored.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

from .gaussian import GaussianRational, as_gaussian
from .words import Word

LiePolynomial = dict  # Word (left-nested monomial) -> GaussianRational
NcPolynomial = dict  # Word -> GaussianRational


def _add_term(acc: dict, key: Word, value: GaussianRational) -> None:
    cur = acc.get(key)
    new = value if cur is None else cur + value
    if new:
        acc[key] = new
    elif cur is not None:
        del acc[key]


def eulerian_idempotent(p: Word) -> LiePolynomial:
    """The Eulerian idempotent of a word, in the left-nested basis.

    Sums over the permutations of the letter positions that fix the
    first position; each permutation contributes the left-nested
    monomial on the permuted letters, weighted by the signed descent
    coefficient of the position sequence.  A word of length n yields
    exactly (n-1)! monomials.

    The weight is a descent statistic of positions, so the result for a
    word with unsorted letters is the relabeled image of the sorted
    case.
    """
    if not p:
        raise ValueError("the idempotent of the empty word is undefined")
    n = len(p)
    lt = p.letters
    out: LiePolynomial = {}
    for tail in itertools.permutations(range(1, n)):
        positions = (0,) + tail
        descents = sum(
            1 for i in range(n - 1) if positions[i] > positions[i + 1]
        )
        coeff = Fraction((-1) ** descents, n * comb(n - 1, descents))
        monomial = Word(lt[i] for i in positions)
        out[monomial] = GaussianRational(coeff)
    return out


def _expand_monomial(monomial: Word) -> dict:
    """Words of the left-nested commutator on ``monomial``'s letters."""
    lt = monomial.letters
    terms = {(lt[0],): 1}
    for x in lt[1:]:
        nxt: dict = {}
        for w, c in terms.items():
            nxt[w + (x,)] = nxt.get(w + (x,), 0) + c
            nxt[(x,) + w] = nxt.get((x,) + w, 0) - c
        terms = nxt
    return terms


def lie_to_words(poly: LiePolynomial) -> NcPolynomial:
    """Expand nested commutators into the free associative algebra."""
    out: NcPolynomial = {}
    for monomial, coeff in poly.items():
        for w, sign in _expand_monomial(monomial).items():
            _add_term(out, Word(w), coeff * sign)
    return out


def left_bracketing(poly: NcPolynomial) -> NcPolynomial:
    """Apply w1...wn -> [...[w1, w2]..., wn] linearly, expanded to words.

    On the word expansion of a homogeneous Lie element of degree n this
    map acts as multiplication by n (the Dynkin-Specht-Wever criterion),
    which is how tests certify that an expansion is a Lie element.
    """
    out: NcPolynomial = {}
    for w, coeff in poly.items():
        for ww, sign in _expand_monomial(w).items():
            _add_term(out, Word(ww), coeff * sign)
    return out


def nc_multiply(a: NcPolynomial, b: NcPolynomial) -> NcPolynomial:
    """Concatenation product, bilinear with exact coefficients."""
    out: NcPolynomial = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            _add_term(out, wa + wb, ca * cb)
    return out


def nc_add(a: NcPolynomial, b: NcPolynomial) -> NcPolynomial:
    out = dict(a)
    for w, c in b.items():
        _add_term(out, w, c)
    return out


def nc_scale(a: NcPolynomial, scalar) -> NcPolynomial:
    scalar = as_gaussian(scalar)
    if not scalar:
        return {}
    return {w: c * scalar for w, c in a.items()}
