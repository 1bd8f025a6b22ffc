"""Combinatorics of multilinear words.

A word is an ordered sequence of distinct positive integer letters.  This
module provides the operations the trace decomposition is built from:
shuffle products, (reduced) deshuffles, descent statistics, the rational
weight attached to a word by its descent number, Lyndon words and the
standard factorization into strictly decreasing Lyndon factors.

Multisets of words (or of word tuples) are represented as
``collections.Counter`` maps so that identities can be asserted as exact
multiset equalities.  All functions are pure and all values immutable.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from functools import total_ordering
from math import comb
from typing import Iterable, Iterator

MAX_LETTER = 1 << 15


@total_ordering
class Word:
    """An immutable multilinear word on the alphabet {1, ..., 2**15}.

    Words compare lexicographically (a proper prefix sorts before its
    extensions) and hash by their letter tuple, so they can be used as
    dictionary keys.  Construction rejects repeated or out-of-range
    letters.
    """

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[int] = ()):
        lt = tuple(int(x) for x in letters)
        for x in lt:
            if not 1 <= x <= MAX_LETTER:
                raise ValueError(f"letter out of range [1, {MAX_LETTER}]: {x}")
        if len(set(lt)) != len(lt):
            raise ValueError(f"word must have distinct letters: {lt}")
        self.letters = lt

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.letters[i])
        return self.letters[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __lt__(self, other: "Word") -> bool:
        return self.letters < other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __repr__(self) -> str:
        return f"Word({','.join(map(str, self.letters))})"

    def __str__(self) -> str:
        if all(x <= 9 for x in self.letters):
            return "".join(map(str, self.letters)) or "e"
        return ",".join(map(str, self.letters)) or "e"


EMPTY_WORD = Word()


def shuffle(a: Word, b: Word) -> Counter:
    """Multiset of all interleavings of ``a`` and ``b``.

    The letters of each input keep their relative order.  For disjoint
    inputs there are exactly ``C(|a|+|b|, |a|)`` outputs, all distinct.
    Overlapping letter sets are rejected (the result would not be
    multilinear).
    """
    if set(a.letters) & set(b.letters):
        raise ValueError(f"shuffle requires disjoint letter sets: {a}, {b}")
    n, m = len(a), len(b)
    out: Counter = Counter()
    for positions in itertools.combinations(range(n + m), n):
        slots = [0] * (n + m)
        pos_set = set(positions)
        ai = iter(a.letters)
        bi = iter(b.letters)
        for i in range(n + m):
            slots[i] = next(ai) if i in pos_set else next(bi)
        out[Word(slots)] += 1
    return out


def shuffle_many(words: Iterable[Word]) -> Counter:
    """Iterated shuffle product, as a multiset of words."""
    out: Counter = Counter({EMPTY_WORD: 1})
    for w in words:
        nxt: Counter = Counter()
        for u, cu in out.items():
            for v, cv in shuffle(u, w).items():
                nxt[v] += cu * cv
        out = nxt
    return out


def scalar_product(x: Word, y: Word) -> int:
    """1 if the words are equal letter-for-letter, else 0."""
    return 1 if x.letters == y.letters else 0


def _ordered_partitions(letters: tuple, k: int) -> Iterator[tuple]:
    """Ordered set partitions of ``letters`` into k non-empty blocks.

    Each block is a tuple of letters in induced order.  Letters are
    assigned one at a time; a block must be non-empty by the end, which
    prunes assignments that cannot become surjective.
    """
    n = len(letters)
    blocks: list[list] = [[] for _ in range(k)]

    def rec(i: int, empty: int) -> Iterator[tuple]:
        if n - i < empty:
            return
        if i == n:
            yield tuple(tuple(b) for b in blocks)
            return
        x = letters[i]
        for j in range(k):
            was_empty = not blocks[j]
            blocks[j].append(x)
            yield from rec(i + 1, empty - was_empty)
            blocks[j].pop()

    return rec(0, k)


def deshuffle(p: Word, k: int, reduced: bool = True) -> Counter:
    """The k-fold deshuffle of ``p`` as a multiset of k-tuples of words.

    Dual to the shuffle product: the multiplicity of (X1, ..., Xk) equals
    the scalar product of ``p`` with the shuffle X1 w X2 w ... w Xk.  For
    a multilinear word this is enumerated directly as the ordered set
    partitions of the letters into k blocks, each block keeping the
    induced order; ``reduced=True`` drops tuples containing the empty
    word (equivalently, requires the blocks to be non-empty).
    """
    if k < 1:
        raise ValueError(f"deshuffle order must be >= 1, got {k}")
    out: Counter = Counter()
    if reduced:
        for blocks in _ordered_partitions(p.letters, k):
            out[tuple(Word(b) for b in blocks)] += 1
    else:
        for assignment in itertools.product(range(k), repeat=len(p)):
            blocks: list[list] = [[] for _ in range(k)]
            for x, j in zip(p.letters, assignment):
                blocks[j].append(x)
            out[tuple(Word(b) for b in blocks)] += 1
    return out


def descent_number(p: Word) -> int:
    """Number of positions where a letter exceeds its successor."""
    lt = p.letters
    return sum(1 for i in range(len(lt) - 1) if lt[i] > lt[i + 1])


def c_coefficient(p: Word) -> Fraction:
    """The signed rational weight (-1)**d / (n * C(n-1, d)) of a word.

    Here n is the length and d the descent number; the weight depends on
    the word only through (n, d).
    """
    if not p:
        raise ValueError("the empty word carries no coefficient")
    n = len(p)
    d = descent_number(p)
    return Fraction((-1) ** d, n * comb(n - 1, d))


def is_lyndon(p: Word) -> bool:
    """True iff the first letter is the minimum (multilinear case)."""
    if not p:
        raise ValueError("the empty word is not eligible")
    return p.letters[0] == min(p.letters)


def standard_factorization(p: Word) -> tuple[Word, ...]:
    """Unique factorization into strictly decreasing Lyndon factors.

    Scanning for the minimum letter splits off the final factor; the
    prefix is factorized the same way.  The factors are Lyndon words,
    strictly decreasing lexicographically, and concatenate to ``p``.
    """
    if not p:
        raise ValueError("cannot factorize the empty word")
    factors: list[Word] = []
    rest = p.letters
    while rest:
        j = rest.index(min(rest))
        factors.append(Word(rest[j:]))
        rest = rest[:j]
    factors.reverse()
    return tuple(factors)
