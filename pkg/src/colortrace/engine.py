"""Trace decomposition formulas and their oracles.

Four routes to the same object live here:

* ``decompose_eform`` — the compact form: a symmetrized-trace slot per
  deshuffle block of the trace word, coefficients left symbolic.
* ``decompose_closed`` — the fully expanded closed formula: one term per
  permutation of the non-pivot letters, built from the permutation's
  standard factorization, canonicalized.
* ``solomon_projection`` — the projection identity in the free
  associative algebra; evaluating it is an exact self-test that the
  idempotent expansion machinery is right.
* ``oracle_commutation`` — brute-force decomposition by symmetrizing and
  commuting generators back into place, independent of the idempotent
  route entirely.

A trace query is just a multilinear ``Word``; its first letter is the
distinguished pivot that stays inside every symmetrized trace (callers
wanting a different pivot rotate the word first, which is legitimate by
trace cyclicity).
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .colorexpr import (
    ColorExpr,
    ColorTerm,
    _sort3,
    canonical_accumulate,
    canonical_term,
    canonicalize,
    f_chain,
    eulerian_coefficients,
    reduce_two_index_d,
    term_dummies,
)
from .freelie import NcPolynomial, eulerian_idempotent, lie_to_words, nc_multiply
from .gaussian import GaussianRational, as_gaussian, i_power
from .words import Word, _ordered_partitions, c_coefficient, standard_factorization

TraceQuery = Word


def _set_partitions(items: tuple):
    """All partitions of ``items`` into unordered non-empty blocks, each
    block in induced order."""
    n = len(items)
    blocks: list[list] = []

    def rec(i: int):
        if i == n:
            yield tuple(tuple(b) for b in blocks)
            return
        x = items[i]
        for b in blocks:
            b.append(x)
            yield from rec(i + 1)
            b.pop()
        blocks.append([x])
        yield from rec(i + 1)
        blocks.pop()

    yield from rec(0)


@dataclass(frozen=True)
class EFormTerm:
    """One term of the compact decomposition.

    ``slots`` partition the non-pivot letters, ordered decreasingly
    (the ordered form of the formula, which makes every weight 1).
    Single-letter slots contract into the symmetrized trace; the rest
    stay as symbolic idempotent-coefficient slots.
    """

    pivot: int
    slots: tuple
    weight: Fraction = Fraction(1)

    def single_letters(self) -> tuple:
        return tuple(sorted(w.letters[0] for w in self.slots if len(w) == 1))

    def e_slots(self) -> tuple:
        """Multi-letter slots in display order (shorter first, then lex)."""
        return tuple(
            sorted((w for w in self.slots if len(w) >= 2), key=lambda w: (len(w), w.letters))
        )

    def d_letters(self) -> tuple:
        return (self.pivot,) + self.single_letters()


@dataclass(frozen=True)
class EFormExpansion:
    trace: Word
    terms: tuple


def _eform_sort_key(t: EFormTerm):
    e_words = tuple(w.letters for w in t.e_slots())
    return (
        sum(len(w) for w in e_words),
        -len(e_words),
        t.d_letters(),
        e_words,
    )


def decompose_eform(q: Word) -> EFormExpansion:
    """Compact decomposition of a trace word: one term per set partition
    of the non-pivot letters (ordered slot form, unit weights)."""
    if len(q) < 2:
        raise ValueError(f"trace must have at least two indices, got {q!r}")
    pivot = q.letters[0]
    rest = q.letters[1:]
    terms = []
    for blocks in _set_partitions(rest):
        slots = tuple(sorted((Word(b) for b in blocks), reverse=True))
        terms.append(EFormTerm(pivot, slots))
    terms.sort(key=_eform_sort_key)
    return EFormExpansion(q, tuple(terms))


def _slot_chain_terms(x: EFormExpansion):
    """Raw product terms of a compact expansion: one per choice of a
    chain from every slot's idempotent coefficients (the terms the
    closed formula generates, before any merging)."""
    for t in x.terms:
        k = len(t.slots)
        outs = [-(j + 1) for j in range(k)]
        next_fresh = -(k + 1)
        slot_choices = []
        for w, out_id in zip(t.slots, outs):
            e = eulerian_coefficients(w, out_id)
            shifted = []
            for et in e.terms:
                closed = [u for u in term_dummies(et.factors) if u != out_id]
                mapping = {}
                for u in closed:
                    mapping[u] = next_fresh
                    next_fresh -= 1
                shifted.append(
                    (
                        et.coeff,
                        tuple(
                            (kind, tuple(mapping.get(v, v) for v in idx))
                            for kind, idx in et.factors
                        ),
                    )
                )
            slot_choices.append(shifted)
        d_factor = ("d", (t.pivot,) + tuple(outs))
        for combo in itertools.product(*slot_choices):
            coeff = as_gaussian(t.weight)
            factors = [d_factor]
            for c, fs in combo:
                coeff = coeff * c
                factors.extend(fs)
            yield ColorTerm(coeff, tuple(factors))


def expand_eform(x: EFormExpansion) -> ColorExpr:
    """Substitute idempotent coefficients into a compact expansion and
    canonicalize, rewriting two-slot d factors as half deltas so small
    traces land on their fully reduced form."""
    out_terms = tuple(_slot_chain_terms(x))
    return canonicalize(reduce_two_index_d(ColorExpr(out_terms)))


def closed_formula_terms(q: Word):
    """Raw closed-formula terms, one per permutation of the non-pivot
    letters, before any merging: i**(n-k) times the product of descent
    weights of the standard factors times the d-slot and f-chains."""
    if len(q) < 2:
        raise ValueError(f"trace must have at least two indices, got {q!r}")
    pivot = q.letters[0]
    rest = q.letters[1:]
    n = len(rest)
    for perm in itertools.permutations(range(1, n + 1)):
        factors_words = standard_factorization(Word(perm))
        k = len(factors_words)
        coeff = as_gaussian(i_power(n - k))
        for fw in factors_words:
            coeff = coeff * c_coefficient(fw)
        d_slots = [pivot]
        chain_factors = []
        next_dummy = -1 - k
        for j, fw in enumerate(factors_words):
            out_id = -(j + 1)
            d_slots.append(out_id)
            chain = f_chain(
                Word(rest[r - 1] for r in fw.letters), out_id, first_dummy=next_dummy
            )
            chain_factors.extend(chain.factors)
            next_dummy -= max(0, len(fw) - 2)
        yield ColorTerm(coeff, (("d", tuple(d_slots)),) + tuple(chain_factors))


def _canon_chunk(args):
    terms, open_ids = args
    return canonical_accumulate(terms, frozenset(open_ids))


def worker_count() -> int:
    """Process workers for the data-parallel sweeps: all cores, capped by
    COLORTRACE_THREADS."""
    n = os.cpu_count() or 1
    cap = os.environ.get("COLORTRACE_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return max(1, n)


def _merge_accs(acc_list) -> dict:
    total: dict = {}
    for acc in acc_list:
        for enc, coeff in acc.items():
            cur = total.get(enc)
            new = coeff if cur is None else cur + coeff
            if new:
                total[enc] = new
            elif cur is not None:
                del total[enc]
    return total


def _expr_from_acc(total: dict) -> ColorExpr:
    return ColorExpr(tuple(ColorTerm(total[fs], fs) for fs in sorted(total)))


def decompose_closed(q: Word) -> ColorExpr:
    """Closed-formula decomposition, canonicalized.

    The permutation sweep is independent term construction; above a size
    threshold the canonicalization runs on a process pool in chunks (the
    merge is a commutative sum, so the result does not depend on
    scheduling)."""
    terms = list(closed_formula_terms(q))
    workers = worker_count()
    if workers > 1 and len(terms) >= 512:
        from concurrent.futures import ProcessPoolExecutor

        chunk = (len(terms) + workers - 1) // workers
        jobs = [(terms[i : i + chunk], ()) for i in range(0, len(terms), chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            accs = list(pool.map(_canon_chunk, jobs))
        return _expr_from_acc(_merge_accs(accs))
    return _expr_from_acc(_canon_chunk((terms, ())))


def solomon_projection(p: Word) -> NcPolynomial:
    """Evaluate the projection identity in the free associative algebra.

    Sums 1/k! times the product of idempotent expansions over every
    reduced k-deshuffle of ``p``.  The identity says the result is the
    single word ``p`` with coefficient one; returning anything else
    means the idempotent machinery is broken.
    """
    if not p:
        raise ValueError("projection of the empty word is undefined")
    expansions: dict = {}

    def block_expansion(block: tuple) -> NcPolynomial:
        if block not in expansions:
            expansions[block] = lie_to_words(eulerian_idempotent(Word(block)))
        return expansions[block]

    acc: NcPolynomial = {}
    n = len(p)
    for k in range(1, n + 1):
        weight = GaussianRational(Fraction(1, factorial(k)))
        for blocks in _ordered_partitions(p.letters, k):
            prod = block_expansion(blocks[0])
            for b in blocks[1:]:
                prod = nc_multiply(prod, block_expansion(b))
            for w, c in prod.items():
                cur = acc.get(w)
                new = c * weight if cur is None else cur + c * weight
                if new:
                    acc[w] = new
                elif cur is not None:
                    del acc[w]
    return acc


def _pattern_chunk_ref(args) -> dict:
    """Reference implementation of the correction expansion: remap every
    substituted term and fold it through the generic canonicalizer.

    Pattern coefficients are plain Fractions: every structure constant
    enters together with one factor of i, so a term's phase is i to the
    number of f factors and needs no explicit bookkeeping.
    """
    items, sub, nfact = args
    acc: dict = {}
    for (x, y, shorter), count in items:
        pre = Fraction(-count, nfact)
        wmap = tuple(-1 if tok == 0 else tok for tok in shorter)
        for scoeff, sfactors in sub:
            factors = [("f", (x, y, -1))]
            for kind, idx in sfactors:
                factors.append(
                    (kind, tuple([wmap[t - 1] if t > 0 else t - 1 for t in idx]))
                )
            enc, val = canonical_term(pre * scoeff, factors)
            if enc is None or not val:
                continue
            cur = acc.get(enc)
            new = val if cur is None else cur + val
            if new:
                acc[enc] = new
            elif cur is not None:
                del acc[enc]
    return acc


def _prep_subterm(n: int, scoeff, sfactors):
    """Per-subterm structure reused across all corrections of one level.

    Every slot token occurs exactly once among a term's free slots and
    every sub-dummy exactly twice, so occurrence positions are fixed;
    only the letters substituted for the tokens change per correction.
    """
    token_loc = [0] * n  # token -> factor position (1-based; 0 is the f prefix)
    dum_occ: dict = {}
    recs = []
    delta_tokens = set()
    for pos, (kind, idx) in enumerate(sfactors, start=1):
        tokens = tuple(t for t in idx if t > 0)
        for t in tokens:
            token_loc[t] = pos
        for t in idx:
            if t < 0:
                dum_occ.setdefault(t - 1, []).append(pos)
        if kind == "delta":
            delta_tokens.update(tokens)
            if len(tokens) < 2:
                # a delta holding a sub-dummy would need contraction
                delta_tokens.update(range(1, n))
        recs.append((_KIND_RANK_LOCAL[kind], len(idx), tokens))
    return (scoeff, sfactors, recs, token_loc, dum_occ, delta_tokens)


_KIND_RANK_LOCAL = {"delta": 0, "d": 1, "f": 2}


def _pattern_chunk(args) -> dict:
    """Expand one batch of reordering corrections against the shorter
    pattern and fold the terms into canonical form.

    Fast path for the overwhelmingly common case: no delta contraction
    triggered by the placeholder and all dummy colors distinct, in which
    case the canonical relabeling is forced and the encoding can be
    assembled directly.  Anything else falls back to the generic
    canonicalizer; both produce identical canonical forms.
    """
    items, sub, nfact = args
    n = len(items[0][0][2]) + 1 if items else 0
    prepped = [_prep_subterm(n, scoeff, sfactors) for scoeff, sfactors in sub]
    acc: dict = {}
    for (x, y, shorter), count in items:
        pre = Fraction(-count, nfact)
        wmap = (0,) + shorter  # token t -> wmap[t]; placeholder stays 0
        p0 = shorter.index(0) + 1
        pref_frees = (x, y) if x < y else (y, x)
        for scoeff, sfactors, recs, token_loc, dum_occ, delta_tokens in prepped:
            val = pre * scoeff
            if p0 in delta_tokens:
                factors = [("f", (x, y, -1))]
                for kind, idx in sfactors:
                    factors.append(
                        (
                            kind,
                            tuple(
                                [
                                    (-1 if t == p0 else wmap[t]) if t > 0 else t - 1
                                    for t in idx
                                ]
                            ),
                        )
                    )
                enc, v = canonical_term(val, factors)
                if enc is None or not v:
                    continue
                cur = acc.get(enc)
                new = v if cur is None else cur + v
                if new:
                    acc[enc] = new
                elif cur is not None:
                    del acc[enc]
                continue

            # mapped free letters per factor (prefix is position 0)
            mfs = [pref_frees]
            for rank, ln, tokens in recs:
                lst = sorted(wmap[t] for t in tokens if t != p0)
                mfs.append(tuple(lst))

            # invariant signature of every closed dummy
            sigs = []
            c_pos = token_loc[p0]
            da = (2, 3, pref_frees)
            db = recs[c_pos - 1]
            dbd = (db[0], db[1], mfs[c_pos])
            sigs.append(((da, dbd) if da <= dbd else (dbd, da), -1))
            collided = False
            for u, occ in dum_occ.items():
                pa, pb = occ if len(occ) == 2 else (occ[0], occ[0])
                ra = recs[pa - 1]
                rb = recs[pb - 1]
                da = (ra[0], ra[1], mfs[pa])
                db = (rb[0], rb[1], mfs[pb])
                sigs.append(((da, db) if da <= db else (db, da), u))
            sigs.sort()
            mapping = {}
            prev = None
            for k, (sg, u) in enumerate(sigs):
                if sg == prev:
                    collided = True
                    break
                prev = sg
                mapping[u] = -(k + 1)
            if collided:
                factors = [("f", (x, y, -1))]
                for kind, idx in sfactors:
                    factors.append(
                        (
                            kind,
                            tuple(
                                [
                                    (-1 if t == p0 else wmap[t]) if t > 0 else t - 1
                                    for t in idx
                                ]
                            ),
                        )
                    )
                enc, v = canonical_term(val, factors)
                if enc is None or not v:
                    continue
                cur = acc.get(enc)
                new = v if cur is None else cur + v
                if new:
                    acc[enc] = new
                elif cur is not None:
                    del acc[enc]
                continue

            # assemble the canonical encoding directly
            sign = 1
            triple, s = _sort3((x, y, mapping[-1]))
            enc_list = [("f", triple)]
            for kind, idx in sfactors:
                if kind == "f":
                    a, b, c = (
                        (mapping[-1] if t == p0 else wmap[t])
                        if t > 0
                        else mapping[t - 1]
                        for t in idx
                    )
                    triple, s2 = _sort3((a, b, c))
                    s *= s2
                    enc_list.append(("f", triple))
                else:
                    pos_part = [
                        (mapping[-1] if t == p0 else wmap[t]) if t > 0 else mapping[t - 1]
                        for t in idx
                    ]
                    frees = sorted(t for t in pos_part if t > 0)
                    dums = sorted((t for t in pos_part if t < 0), reverse=True)
                    enc_list.append((kind, tuple(frees + dums)))
            enc_list.sort()
            enc = tuple(enc_list)
            v = val * s
            cur = acc.get(enc)
            new = v if cur is None else cur + v
            if new:
                acc[enc] = new
            elif cur is not None:
                del acc[enc]
    return acc


@lru_cache(maxsize=None)
def _trace_pattern(n: int) -> tuple:
    """Decomposition of a generic length-n trace over slot tokens 1..n.

    Implements the symmetrization argument: the trace equals its
    symmetrized trace plus the commutator corrections that arise from
    reordering each of the n! orderings back to the slot order.  Each
    correction carries one structure constant and a strictly shorter
    trace, which is expanded through the (memoized) shorter pattern.
    Terms are merged in canonical form, so each level stays compact; the
    result is still generally not a basis.  Coefficients are Fractions
    with an implicit phase of i per f factor.
    """
    if n == 1:
        return ((Fraction(1), (("d", (1,)),)),)
    if n == 2:
        return ((Fraction(1, 2), (("delta", (1, 2)),)),)
    corrections: Counter = Counter()
    for perm in itertools.permutations(range(1, n + 1)):
        w = list(perm)
        while True:
            j = next((i for i in range(len(w) - 1) if w[i] > w[i + 1]), None)
            if j is None:
                break
            x, y = w[j], w[j + 1]
            corrections[(x, y, tuple(w[:j]) + (0,) + tuple(w[j + 2 :]))] += 1
            w[j], w[j + 1] = y, x
    sub = _trace_pattern(n - 1)
    nfact = factorial(n)
    items = list(corrections.items())
    workers = worker_count()
    if workers > 1 and len(items) * len(sub) >= 200_000:
        from concurrent.futures import ProcessPoolExecutor

        chunk = (len(items) + 2 * workers - 1) // (2 * workers)
        jobs = [(items[i : i + chunk], sub, nfact) for i in range(0, len(items), chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            accs = list(pool.map(_pattern_chunk, jobs))
    else:
        accs = [_pattern_chunk((items, sub, nfact))]
    accs.append({(("d", tuple(range(1, n + 1))),): Fraction(1)})
    total = _merge_accs(accs)
    return tuple((total[fs], fs) for fs in sorted(total))


def oracle_commutation(q: Word) -> ColorExpr:
    """Brute-force decomposition via symmetrize-and-commute.

    Shares nothing with the idempotent route; the output is a valid
    expression (generally not in the same form as ``decompose_closed``)
    whose numeric evaluations must agree with it.
    """
    if len(q) < 2:
        raise ValueError(f"trace must have at least two indices, got {q!r}")
    lt = q.letters
    pattern = _trace_pattern(len(lt))
    terms = []
    for frac, factors in pattern:
        n_f = sum(1 for kind, _ in factors if kind == "f")
        terms.append(
            ColorTerm(
                i_power(n_f) * frac,
                tuple(
                    (kind, tuple(lt[t - 1] if t > 0 else t for t in idx))
                    for kind, idx in factors
                ),
            )
        )
    result = ColorExpr(tuple(terms))
    if __debug__:
        from .colorexpr import assert_valid

        assert_valid(result)
    return result


def term_count(n: int) -> int:
    """Number of compact-form terms for a length-n trace."""
    if not 3 <= n <= 10:
        raise ValueError(f"term_count supports 3 <= n <= 10, got {n}")
    return len(decompose_eform(Word(range(1, n + 1))).terms)
