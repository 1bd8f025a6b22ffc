"""Reference expressions the decomposition must reproduce, transcribed
by hand, plus small helpers shared across the tests.

Conventions: trace letters are 1..n with pivot 1; `a`/`b`/`j`/`k` name
contracted indices and become negative identifiers; the reference
idempotent coefficients use OUT = 9 as a free sentinel for the open
index.
"""

from collections import Counter
from fractions import Fraction as Fr

from colortrace import ColorExpr, Word, d, delta, f, term
from colortrace.gaussian import GaussianRational as G


def w(s) -> Word:
    """Word from a digit string, e.g. w('2134')."""
    return Word(int(ch) for ch in str(s))


def gi(num, den=1) -> G:
    """num*i/den as an exact coefficient."""
    return G(0, Fr(num, den))


A, B = -1, -2
OUT = 9
J, K = -1, -2

# Fully reduced decompositions of Tr(T^1 ... T^n) for n = 2..5.
CLOSED_TABLE = {
    2: ColorExpr((term(Fr(1, 2), delta(1, 2)),)),
    3: ColorExpr((term(1, d(1, 2, 3)), term(gi(1, 4), f(1, 2, 3)))),
    4: ColorExpr(
        (
            term(1, d(1, 2, 3, 4)),
            term(Fr(-1, 6), f(2, 3, A), f(A, 4, 1)),
            term(Fr(1, 12), f(2, 4, A), f(A, 3, 1)),
            term(gi(1, 2), d(1, 2, A), f(A, 3, 4)),
            term(gi(1, 2), d(1, 3, A), f(A, 2, 4)),
            term(gi(1, 2), d(1, 4, A), f(A, 2, 3)),
        )
    ),
    5: ColorExpr(
        (
            term(1, d(1, 2, 3, 4, 5)),
            term(gi(-3, 24), f(2, 3, A), f(A, 4, B), f(B, 5, 1)),
            term(gi(1, 24), f(2, 3, A), f(A, 5, B), f(B, 4, 1)),
            term(gi(1, 24), f(2, 4, A), f(A, 3, B), f(B, 5, 1)),
            term(gi(1, 24), f(2, 4, A), f(A, 5, B), f(B, 3, 1)),
            term(gi(1, 24), f(2, 5, A), f(A, 3, B), f(B, 4, 1)),
            term(gi(-1, 24), f(2, 5, A), f(A, 4, B), f(B, 3, 1)),
            term(Fr(-1, 4), d(1, A, B), f(2, 3, A), f(4, 5, B)),
            term(Fr(-1, 4), d(1, A, B), f(2, 4, A), f(3, 5, B)),
            term(Fr(-1, 4), d(1, A, B), f(2, 5, A), f(3, 4, B)),
            term(Fr(-1, 3), d(1, 2, A), f(3, 4, B), f(B, 5, A)),
            term(Fr(1, 6), d(1, 2, A), f(3, 5, B), f(B, 4, A)),
            term(Fr(-1, 3), d(1, 3, A), f(2, 4, B), f(B, 5, A)),
            term(Fr(1, 6), d(1, 3, A), f(2, 5, B), f(B, 4, A)),
            term(Fr(-1, 3), d(1, 4, A), f(2, 3, B), f(B, 5, A)),
            term(Fr(1, 6), d(1, 4, A), f(2, 5, B), f(B, 3, A)),
            term(Fr(-1, 3), d(1, 5, A), f(2, 3, B), f(B, 4, A)),
            term(Fr(1, 6), d(1, 5, A), f(2, 4, B), f(B, 3, A)),
            term(gi(1, 2), d(1, 2, 3, A), f(A, 4, 5)),
            term(gi(1, 2), d(1, 2, 4, A), f(A, 3, 5)),
            term(gi(1, 2), d(1, 2, 5, A), f(A, 3, 4)),
            term(gi(1, 2), d(1, 3, 4, A), f(A, 2, 5)),
            term(gi(1, 2), d(1, 3, 5, A), f(A, 2, 4)),
            term(gi(1, 2), d(1, 4, 5, A), f(A, 2, 3)),
        )
    ),
}

# Idempotent coefficient expansions with the open index OUT.
E_COEFF_TABLE = {
    "12": ColorExpr((term(gi(1, 2), f(1, 2, OUT)),)),
    "123": ColorExpr(
        (
            term(Fr(-1, 3), f(1, 2, J), f(J, 3, OUT)),
            term(Fr(1, 6), f(1, 3, J), f(J, 2, OUT)),
        )
    ),
    "1234": ColorExpr(
        (
            term(gi(-1, 4), f(1, 2, J), f(J, 3, K), f(K, 4, OUT)),
            term(gi(1, 12), f(1, 2, J), f(J, 4, K), f(K, 3, OUT)),
            term(gi(1, 12), f(1, 3, J), f(J, 2, K), f(K, 4, OUT)),
            term(gi(1, 12), f(1, 3, J), f(J, 4, K), f(K, 2, OUT)),
            term(gi(1, 12), f(1, 4, J), f(J, 2, K), f(K, 3, OUT)),
            term(gi(-1, 12), f(1, 4, J), f(J, 3, K), f(K, 2, OUT)),
        )
    ),
}

# Idempotent in the nested-commutator basis: monomial word -> weight.
IDEMPOTENT_TABLE = {
    "12": {"12": Fr(1, 2)},
    "123": {"123": Fr(1, 3), "132": Fr(-1, 6)},
    "1234": {
        "1234": Fr(1, 4),
        "1243": Fr(-1, 12),
        "1324": Fr(-1, 12),
        "1342": Fr(-1, 12),
        "1423": Fr(-1, 12),
        "1432": Fr(1, 12),
    },
}


def _eform_entries(spec: str) -> Counter:
    """Counter of (d letters, sorted slot words) from a compact spec
    like 'd12a E34 | d1a E234'."""
    out: Counter = Counter()
    for chunk in spec.split("|"):
        parts = chunk.split()
        d_letters = tuple(int(c) for c in parts[0][1:] if c.isdigit())
        slots = tuple(
            sorted(tuple(int(c) for c in p[1:]) for p in parts[1:])
        )
        out[(d_letters, slots)] += 1
    return out


# Structural compact-form tables for n = 3..6: which symmetrized-trace
# slot goes with which partition of the remaining letters.
EFORM_TABLE = {
    3: _eform_entries("d123 | d1a E23"),
    4: _eform_entries("d1234 | d12a E34 | d13a E24 | d14a E23 | d1a E234"),
    5: _eform_entries(
        "d12345 | d123a E45 | d124a E35 | d125a E34 | d134a E25 | d135a E24"
        " | d145a E23 | d12a E345 | d13a E245 | d14a E235 | d15a E234"
        " | d1ab E23 E45 | d1ab E24 E35 | d1ab E25 E34 | d1a E2345"
    ),
    6: _eform_entries(
        "d123456"
        " | d1234a E56 | d1235a E46 | d1236a E45 | d1245a E36 | d1246a E35"
        " | d1256a E34 | d1345a E26 | d1346a E25 | d1356a E24 | d1456a E23"
        " | d123a E456 | d124a E356 | d125a E346 | d126a E345 | d134a E256"
        " | d135a E246 | d136a E245 | d145a E236 | d146a E235 | d156a E234"
        " | d12ab E34 E56 | d12ab E35 E46 | d12ab E36 E45"
        " | d13ab E24 E56 | d13ab E25 E46 | d13ab E26 E45"
        " | d14ab E23 E56 | d14ab E25 E36 | d14ab E26 E35"
        " | d15ab E23 E46 | d15ab E24 E36 | d15ab E26 E34"
        " | d16ab E23 E45 | d16ab E24 E35 | d16ab E25 E34"
        " | d12a E3456 | d13a E2456 | d14a E2356 | d15a E2346 | d16a E2345"
        " | d1ab E23 E456 | d1ab E24 E356 | d1ab E25 E346 | d1ab E26 E345"
        " | d1ab E34 E256 | d1ab E35 E246 | d1ab E36 E245 | d1ab E45 E236"
        " | d1ab E46 E235 | d1ab E56 E234"
        " | d1a E23456"
    ),
}

BELL_COUNTS = {3: 2, 4: 5, 5: 15, 6: 52, 7: 203, 8: 877, 9: 4140}
