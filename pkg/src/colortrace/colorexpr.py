"""Exact symbolic algebra of adjoint-index tensors.

A term is a Gaussian-rational coefficient times a product of factors
``d^{...}`` (totally symmetric), ``f^{ijk}`` (totally antisymmetric) and
``delta^{ij}``.  Indices are plain integers: positive values are free
adjoint labels, negative values are contracted (dummy) labels that must
appear exactly twice within a term.

``canonicalize`` brings expressions into a normal form in which two
terms equal modulo slot symmetry/antisymmetry and dummy renaming compare
identically: deltas carrying a dummy are contracted away, slots are
sorted (the sign of an odd f-slot permutation is absorbed into the
coefficient), and dummy labels are chosen by minimizing the term
encoding over relabelings.  The relabeling search is restricted to
bijections that respect an isomorphism-invariant coloring of the
dummies, which loses no merges but keeps the search linear for the
chain-shaped terms the decomposition produces.  Equality modulo Jacobi
identities is NOT decided.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .gaussian import GaussianRational, ZERO, as_gaussian, i_power
from .words import Word

Factor = tuple  # (kind, indices) with kind in {"delta", "d", "f"}

_KIND_RANK = {"delta": 0, "d": 1, "f": 2}

_BIG = 1_000_000_000

# Safety valve for pathological automorphism groups; decomposition terms
# never get near it.
_MAX_LABELINGS = 10080

_FACTORIALS = (1, 1, 2, 6, 24, 120, 720, 5040)


def delta(i: int, j: int) -> Factor:
    return ("delta", (i, j))


def f(i: int, j: int, k: int) -> Factor:
    return ("f", (i, j, k))


def d(*indices: int) -> Factor:
    if not indices:
        raise ValueError("d needs at least one slot")
    return ("d", tuple(indices))


@dataclass(frozen=True)
class ColorTerm:
    coeff: GaussianRational
    factors: tuple


@dataclass(frozen=True)
class ColorExpr:
    terms: tuple

    def __add__(self, other: "ColorExpr") -> "ColorExpr":
        return expr_add(self, other)

    def __mul__(self, other):
        if isinstance(other, ColorExpr):
            return expr_mul(self, other)
        return expr_scale(self, other)

    __rmul__ = __mul__

    def __sub__(self, other: "ColorExpr") -> "ColorExpr":
        return expr_add(self, expr_scale(other, -1))


ZERO_EXPR = ColorExpr(())


def term(coeff, *factors) -> ColorTerm:
    return ColorTerm(as_gaussian(coeff), tuple(factors))


def expr(*terms: ColorTerm) -> ColorExpr:
    return ColorExpr(tuple(terms))


def term_dummies(factors) -> list:
    """Distinct dummy identifiers in order of first appearance."""
    seen: dict = {}
    for _, idx in factors:
        for t in idx:
            if t < 0 and t not in seen:
                seen[t] = None
    return list(seen)


def assert_valid_term(factors, open_indices: frozenset = frozenset()) -> None:
    """Check the pairing invariant: every closed dummy appears exactly
    twice in the term, every open one exactly once."""
    counts: dict = {}
    for _, idx in factors:
        for t in idx:
            if t < 0:
                counts[t] = counts.get(t, 0) + 1
    for t, c in counts.items():
        want = 1 if t in open_indices else 2
        if c != want:
            raise ValueError(
                f"dummy {t} appears {c} times (expected {want}) in {factors}"
            )


def assert_valid(e: ColorExpr, open_indices: Iterable[int] = ()) -> None:
    open_set = frozenset(open_indices)
    for t in e.terms:
        assert_valid_term(t.factors, open_set)


def free_letters(e: ColorExpr) -> set:
    out: set = set()
    for t in e.terms:
        for _, idx in t.factors:
            out.update(x for x in idx if x > 0)
    return out


def _contract_deltas(factors: list, open_indices: frozenset) -> list:
    """Remove every delta that carries a contractible dummy slot.

    A dummy slot is contractible when its partner occurrence lives in a
    different factor; the delta is dropped and the partner slot renamed
    to the delta's other index.  Self-paired deltas delta^{cc} and
    deltas with two free slots survive.
    """
    changed = True
    while changed:
        changed = False
        occurrences: dict = {}
        for fi, (kind, idx) in enumerate(factors):
            for si, t in enumerate(idx):
                if t < 0:
                    occurrences.setdefault(t, []).append((fi, si))
        for fi, (kind, idx) in enumerate(factors):
            if kind != "delta":
                continue
            u, v = idx
            if u == v:
                continue
            for a, b in ((u, v), (v, u)):
                if a >= 0 or a in open_indices:
                    continue
                partners = [loc for loc in occurrences.get(a, []) if loc[0] != fi]
                if not partners:
                    continue
                pf, ps = partners[0]
                pkind, pidx = factors[pf]
                factors[pf] = (pkind, pidx[:ps] + (b,) + pidx[ps + 1 :])
                del factors[fi]
                changed = True
                break
            if changed:
                break
    return factors


def _sort3(idx):
    """Sort an f factor's three slots, tracking the permutation sign."""
    a, b, c = idx
    ka = a if a > 0 else _BIG - a
    kb = b if b > 0 else _BIG - b
    kc = c if c > 0 else _BIG - c
    sign = 1
    if ka > kb:
        a, b, ka, kb = b, a, kb, ka
        sign = -1
    if kb > kc:
        b, c, kb, kc = c, b, kc, kb
        sign = -sign
        if ka > kb:
            a, b = b, a
            sign = -sign
    return (a, b, c), sign


def _normalize_factor(kind, idx):
    """Slot-sorted form of a factor and the absorbed sign."""
    if kind == "f":
        return _sort3(idx)
    if len(idx) == 2:
        a, b = idx
        ka = a if a > 0 else _BIG - a
        kb = b if b > 0 else _BIG - b
        return ((a, b) if ka <= kb else (b, a)), 1
    pos = sorted(t for t in idx if t > 0)
    neg = sorted((t for t in idx if t < 0), reverse=True)
    return tuple(pos + neg), 1


def _encode(factors, mapping):
    """Normalized, sorted factor tuple under a dummy relabeling, with the
    accumulated antisymmetry sign."""
    enc = []
    sign = 1
    for kind, idx in factors:
        if mapping:
            idx = tuple(mapping.get(t, t) for t in idx)
        sdx, s = _normalize_factor(kind, idx)
        sign *= s
        enc.append((kind, sdx))
    enc.sort()
    return tuple(enc), sign


def _color_groups(factors, closed: list) -> list:
    """Partition closed dummies into relabeling-invariant color classes
    by neighborhood refinement on the pairing graph.

    Equal terms color corresponding dummies alike, so restricting the
    canonical-label search to color-respecting bijections loses no
    merges; non-singleton classes survive only for genuinely automorphic
    terms.
    """
    closed_set = set(closed)
    m = len(closed)
    static = []
    members = []
    occ: dict = {t: [] for t in closed}
    for kind, idx in factors:
        mem = [t for t in idx if t in closed_set]
        if mem:
            pos = len(static)
            frees = tuple(sorted(t for t in idx if t > 0 or t not in closed_set))
            static.append((_KIND_RANK[kind], len(idx), frees))
            members.append(mem)
            for u in mem:
                occ[u].append(pos)
    # first round: each dummy sees the shapes of its two host factors
    sig = {
        u: tuple(sorted(static[p] for p in occ[u])) for u in closed
    }
    if len(set(sig.values())) < m:
        # refine once more with the neighbors' first-round signatures
        sig = {
            u: tuple(
                sorted(
                    static[p] + tuple(sorted(sig[v] for v in members[p] if v != u))
                    for p in occ[u]
                )
            )
            for u in closed
        }
    groups: dict = {}
    for u in closed:
        groups.setdefault(sig[u], []).append(u)
    return [groups[s] for s in sorted(groups)]


def canonical_term(coeff: GaussianRational, factors, open_indices: frozenset = frozenset()):
    """Canonical (factors, coefficient) for one term, or (None, 0) if the
    term vanishes by antisymmetry.

    If the minimal encoding is reached with both signs the term cancels
    against itself under a relabeling and is zero.
    """
    for fa in factors:
        if fa[0] == "delta":
            factors = _contract_deltas(list(factors), open_indices)
            break
    closed_seen: dict = {}
    for kind, idx in factors:
        if kind == "f":
            a, b, c = idx
            if a == b or b == c or a == c:
                return None, ZERO
        for t in idx:
            if t < 0 and t not in open_indices and t not in closed_seen:
                closed_seen[t] = None
    closed = list(closed_seen)
    m = len(closed)

    if m == 0:
        enc, sign = _encode(factors, None)
        return enc, coeff * sign

    names = [-(k + 1) for k in range(m)]
    if open_indices and set(names) & set(open_indices):
        # keep clear of caller-held open identifiers
        low = min(min(open_indices), -m) - 1
        names = [low - k for k in range(m)]

    if m == 1:
        enc, sign = _encode(factors, {closed[0]: names[0]})
        return enc, coeff * sign

    groups = _color_groups(factors, closed)
    if len(groups) == m:
        mapping = {}
        pos = 0
        for g in groups:
            mapping[g[0]] = names[pos]
            pos += 1
        enc, sign = _encode(factors, mapping)
        return enc, coeff * sign

    group_names = []
    pos = 0
    for g in groups:
        group_names.append(names[pos : pos + len(g)])
        pos += len(g)
    total = 1
    for g in groups:
        total *= _FACTORIALS[len(g)] if len(g) < len(_FACTORIALS) else _MAX_LABELINGS
    if total > _MAX_LABELINGS:
        candidate_iter = [tuple(tuple(ns) for ns in group_names)]
    else:
        candidate_iter = itertools.product(
            *(itertools.permutations(ns) for ns in group_names)
        )

    best_enc = None
    best_sign = 0
    ambiguous = False
    for perms in candidate_iter:
        mapping = {}
        for g, ns in zip(groups, perms):
            for t, name in zip(g, ns):
                mapping[t] = name
        enc, sign = _encode(factors, mapping)
        if best_enc is None or enc < best_enc:
            best_enc, best_sign = enc, sign
            ambiguous = False
        elif enc == best_enc and sign != best_sign:
            ambiguous = True
    if ambiguous:
        return None, ZERO
    return best_enc, coeff * best_sign


def canonical_accumulate(terms, open_indices: frozenset = frozenset()) -> dict:
    """Fold terms into a dict of canonical factor tuples -> coefficient."""
    acc: dict = {}
    for t in terms:
        if not t.coeff:
            continue
        enc, coeff = canonical_term(t.coeff, t.factors, open_indices)
        if enc is None or not coeff:
            continue
        cur = acc.get(enc)
        new = coeff if cur is None else cur + coeff
        if new:
            acc[enc] = new
        elif cur is not None:
            del acc[enc]
    return acc


def canonicalize(e: ColorExpr, open_indices: Iterable[int] = ()) -> ColorExpr:
    """Normal form: contracted deltas, sorted slots and factors, minimal
    dummy labels, merged terms, zero terms dropped, deterministic term
    order.  Indices listed in ``open_indices`` are dummies held by the
    caller (appearing once) and are left untouched."""
    open_set = frozenset(open_indices)
    acc = canonical_accumulate(e.terms, open_set)
    result = ColorExpr(
        tuple(ColorTerm(acc[fs], fs) for fs in sorted(acc))
    )
    if __debug__:
        assert_valid(result, open_set)
    return result


def expr_add(a: ColorExpr, b: ColorExpr) -> ColorExpr:
    return ColorExpr(a.terms + b.terms)


def expr_scale(a: ColorExpr, scalar) -> ColorExpr:
    scalar = as_gaussian(scalar)
    if not scalar:
        return ZERO_EXPR
    return ColorExpr(tuple(ColorTerm(t.coeff * scalar, t.factors) for t in a.terms))


def _shift_dummies(factors, mapping) -> tuple:
    return tuple(
        (kind, tuple(mapping.get(t, t) for t in idx)) for kind, idx in factors
    )


def expr_mul(a: ColorExpr, b: ColorExpr) -> ColorExpr:
    """Term-by-term product; the right operand's dummies are freshened so
    the two operands never capture each other's contractions."""
    out = []
    for ta in a.terms:
        da = term_dummies(ta.factors)
        base = min(da, default=0)
        for tb in b.terms:
            db = term_dummies(tb.factors)
            mapping = {t: base - 1 - k for k, t in enumerate(db)}
            out.append(
                ColorTerm(
                    ta.coeff * tb.coeff,
                    ta.factors + _shift_dummies(tb.factors, mapping),
                )
            )
    return ColorExpr(tuple(out))


def reduce_two_index_d(e: ColorExpr) -> ColorExpr:
    """Rewrite every two-slot d factor as half a Kronecker delta."""
    out = []
    for t in e.terms:
        coeff = t.coeff
        factors = []
        for kind, idx in t.factors:
            if kind == "d" and len(idx) == 2:
                coeff = coeff / 2
                factors.append(("delta", idx))
            else:
                factors.append((kind, idx))
        out.append(ColorTerm(coeff, tuple(factors)))
    return ColorExpr(tuple(out))


def f_chain(p: Word, out: int, first_dummy: int | None = None) -> ColorTerm:
    """The nested structure-constant chain of a word, ending in ``out``.

    A single letter gives delta^{p1,out}; otherwise the chain
    f^{p1 p2 c1} f^{c1 p3 c2} ... f^{c_{m-2} p_m out} with fresh dummy
    links.  ``first_dummy`` fixes the first internal identifier (default:
    below ``out`` when out is a dummy, else -1).
    """
    if not p:
        raise ValueError("cannot build a chain on the empty word")
    if out > 0 and out in p.letters:
        raise ValueError(f"output index {out} collides with the word {p}")
    lt = p.letters
    if len(lt) == 1:
        return ColorTerm(GaussianRational(1), (delta(lt[0], out),))
    if first_dummy is None:
        first_dummy = -1 if out > 0 else out - 1
    factors = []
    prev = lt[0]
    link = first_dummy
    for j in range(1, len(lt)):
        nxt = out if j == len(lt) - 1 else link
        factors.append(f(prev, lt[j], nxt))
        prev = nxt
        link -= 1
    return ColorTerm(GaussianRational(1), tuple(factors))


def eulerian_coefficients(p: Word, out: int) -> ColorExpr:
    """Adjoint-index coefficients of the Eulerian idempotent of ``p``.

    Sum over permutations of the letter positions fixing the first: each
    contributes i**(n-1) times the signed descent weight times the chain
    on the permuted word.  Returned canonical; ``out`` (the index the
    coefficient is contracted on) survives untouched.
    """
    if not p:
        raise ValueError("coefficients of the empty word are undefined")
    from .words import c_coefficient  # local import avoids a cycle at load

    n = len(p)
    lt = p.letters
    phase = i_power(n - 1)
    terms = []
    for tail in itertools.permutations(range(1, n)):
        positions = (0,) + tail
        sigma = Word(positions[i] + 1 for i in range(n))
        chain = f_chain(Word(lt[i] for i in positions), out)
        terms.append(ColorTerm(phase * c_coefficient(sigma), chain.factors))
    opens = frozenset((out,)) if out < 0 else frozenset()
    return canonicalize(ColorExpr(tuple(terms)), opens)


def eulerian_coefficients_from_brackets(p: Word, out: int) -> ColorExpr:
    """Cross-check path for the idempotent coefficients.

    Expands the idempotent in the nested-commutator basis and then
    eliminates each commutator through [T^a, T^b] = i f^{abc} T^c,
    reading off the coefficient of the surviving generator.
    """
    from .freelie import eulerian_idempotent

    terms = []
    for monomial, coeff in eulerian_idempotent(p).items():
        lt = monomial.letters
        if len(lt) == 1:
            terms.append(ColorTerm(coeff, (delta(lt[0], out),)))
            continue
        factors = []
        prev = lt[0]
        link = -1 if out > 0 else out - 1
        for j in range(1, len(lt)):
            coeff = coeff.mul_i()
            nxt = out if j == len(lt) - 1 else link
            factors.append(f(prev, lt[j], nxt))
            prev = nxt
            link -= 1
        terms.append(ColorTerm(coeff, tuple(factors)))
    opens = frozenset((out,)) if out < 0 else frozenset()
    return canonicalize(ColorExpr(tuple(terms)), opens)
