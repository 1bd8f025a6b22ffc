import itertools
import random
from collections import Counter
from fractions import Fraction
from math import factorial

import pytest

from colortrace import (
    Word,
    build_algebra,
    canonicalize,
    closed_formula_terms,
    d,
    decompose_closed,
    decompose_eform,
    delta,
    evaluate,
    expand_eform,
    expr,
    f,
    oracle_commutation,
    reduce_two_index_d,
    solomon_projection,
    term,
    term_count,
)
from colortrace.engine import _pattern_chunk, _pattern_chunk_ref, _trace_pattern
from colortrace.gaussian import GaussianRational as G
from reference_tables import BELL_COUNTS, CLOSED_TABLE, EFORM_TABLE, gi, w


def _eform_counter(x):
    return Counter(
        (
            t.d_letters(),
            tuple(sorted(slot.letters for slot in t.e_slots())),
        )
        for t in x.terms
    )


def test_decompose_eform_reference_tables():
    x = decompose_eform(w("123"))
    assert _eform_counter(x) == EFORM_TABLE[3]
    assert _eform_counter(decompose_eform(w("1234"))) == EFORM_TABLE[4]
    two = decompose_eform(w("12"))
    assert _eform_counter(two) == Counter({((1, 2), ()): 1})
    with pytest.raises(ValueError):
        decompose_eform(Word([1]))


def test_decompose_eform_slot_structure():
    x = decompose_eform(w("14325"))
    for t in x.terms:
        assert t.weight == Fraction(1)
        letters = [y for slot in t.slots for y in slot.letters]
        assert sorted(letters) == [2, 3, 4, 5]
        for a, b in zip(t.slots, t.slots[1:]):
            assert a > b
        # slots keep the induced order of the trace word (1 4 3 2 5)
        order = {letter: pos for pos, letter in enumerate((4, 3, 2, 5))}
        for slot in t.slots:
            positions = [order[y] for y in slot.letters]
            assert positions == sorted(positions)


def test_expand_eform_small_tables():
    assert expand_eform(decompose_eform(w("12"))) == canonicalize(CLOSED_TABLE[2])
    assert expand_eform(decompose_eform(w("123"))) == canonicalize(CLOSED_TABLE[3])
    assert expand_eform(decompose_eform(w("1234"))) == canonicalize(CLOSED_TABLE[4])


def test_decompose_closed_matches_eform_route_exactly():
    for n in (2, 3, 4, 5, 6):
        q = Word(range(1, n + 1))
        closed = canonicalize(reduce_two_index_d(decompose_closed(q)))
        assert closed == expand_eform(decompose_eform(q)), n


def test_eform_route_matches_closed_numerically_at_seven():
    su3 = build_algebra("su3")
    q = Word(range(1, 8))
    closed = canonicalize(reduce_two_index_d(decompose_closed(q)))
    via_eform = expand_eform(decompose_eform(q))
    rng = random.Random(9)
    from colortrace.numeric import evaluate_many

    assigns = [
        {letter: rng.randint(1, su3.dim) for letter in q.letters} for _ in range(5)
    ]
    a = evaluate_many(closed, su3, assigns)
    b = evaluate_many(via_eform, su3, assigns)
    assert max(abs(a - b)) <= 1e-10


def test_raw_term_bijection_with_eform_expansion():
    # the raw closed-formula terms and the slot-by-slot expansion of the
    # compact form are the same multiset, term for term, before merging
    from colortrace.colorexpr import canonical_term
    from colortrace.engine import _slot_chain_terms

    for n in (2, 3, 4, 5):
        q = Word(range(1, n + 1))
        closed_raw = Counter()
        for t in closed_formula_terms(q):
            enc, coeff = canonical_term(t.coeff, t.factors)
            closed_raw[(enc, coeff)] += 1
        eform_raw = Counter()
        for t in _slot_chain_terms(decompose_eform(q)):
            enc, coeff = canonical_term(t.coeff, t.factors)
            eform_raw[(enc, coeff)] += 1
        assert closed_raw == eform_raw, n


def test_decompose_closed_raw_count_is_factorial():
    for n in (1, 2, 3, 4, 5):
        q = Word(range(1, n + 2))
        assert sum(1 for _ in closed_formula_terms(q)) == factorial(n)


def test_closed_formula_specific_permutation_terms():
    # individual permutation contributions for the length-5 trace; the
    # rank words below act on letters (2,3,4,5) with pivot 1
    q = w("12345")
    by_perm = dict(
        zip(itertools.permutations(range(1, 5)), closed_formula_terms(q))
    )
    cases = {
        # (24)(13) -> -1/4 d^{1ab} f^{35a} f^{24b}
        (2, 4, 1, 3): term(
            Fraction(-1, 4), d(1, -1, -2), f(3, 5, -1), f(2, 4, -2)
        ),
        # (3)(142) -> 1/6 d^{14b} f^{25c} f^{c3b}
        (3, 1, 4, 2): term(
            Fraction(1, 6), d(1, -1, -2), delta(4, -1), f(2, 5, -3), f(-3, 3, -2)
        ),
        # (4)(23)(1) -> i/2 d^{125b} f^{b34}
        (4, 2, 3, 1): term(
            gi(1, 2), d(1, -1, -2, -3), delta(5, -1), f(3, 4, -2), delta(2, -3)
        ),
        # (1432) -> -i/12 d^{1a} f^{25c} f^{c4b} f^{b3a}
        (1, 4, 3, 2): term(
            gi(-1, 12), d(1, -1), f(2, 5, -2), f(-2, 4, -3), f(-3, 3, -1)
        ),
    }
    for perm, expected in cases.items():
        got = canonicalize(expr(by_perm[perm]))
        assert got == canonicalize(expr(expected)), perm


def test_decompose_closed_n2():
    got = canonicalize(reduce_two_index_d(decompose_closed(w("12"))))
    assert got == canonicalize(CLOSED_TABLE[2])


def test_solomon_projection_small():
    for s in ("1", "12", "123", "1234"):
        p = w(s)
        assert solomon_projection(p) == {p: G(1)}
    with pytest.raises(ValueError):
        solomon_projection(Word([]))


def test_solomon_projection_relabeled_instances():
    rng = random.Random(3)
    for _ in range(8):
        n = rng.randint(1, 5)
        letters = rng.sample(range(1, 40), n)
        p = Word(letters)
        assert solomon_projection(p) == {p: G(1)}


def test_term_count_bell_numbers():
    for n, bell in BELL_COUNTS.items():
        if n <= 7:
            assert term_count(n) == bell
    with pytest.raises(ValueError):
        term_count(2)
    with pytest.raises(ValueError):
        term_count(11)


def test_oracle_commutation_base_cases():
    got = canonicalize(oracle_commutation(w("12")))
    assert got == canonicalize(expr(term(Fraction(1, 2), delta(1, 2))))
    with pytest.raises(ValueError):
        oracle_commutation(Word([1]))


def test_oracle_commutation_su2_triple():
    su2 = build_algebra("su2")
    e = oracle_commutation(w("123"))
    val = evaluate(e, su2, {1: 1, 2: 2, 3: 3})
    assert abs(val - 0.25j) < 1e-12


def test_oracle_commutation_matches_closed_numerically():
    su3 = build_algebra("su3")
    q = w("1234")
    closed = decompose_closed(q)
    comm = oracle_commutation(q)
    rng = random.Random(11)
    for _ in range(30):
        assign = {letter: rng.randint(1, su3.dim) for letter in q.letters}
        a = evaluate(closed, su3, assign)
        b = evaluate(comm, su3, assign)
        assert abs(a - b) <= 1e-10


def test_pattern_fast_path_equals_reference():
    for n in (3, 4, 5):
        sub = _trace_pattern(n - 1)
        corrections = Counter()
        for perm in itertools.permutations(range(1, n + 1)):
            word = list(perm)
            while True:
                j = next(
                    (i for i in range(len(word) - 1) if word[i] > word[i + 1]), None
                )
                if j is None:
                    break
                x, y = word[j], word[j + 1]
                key = (x, y, tuple(word[:j]) + (0,) + tuple(word[j + 2 :]))
                corrections[key] += 1
                word[j], word[j + 1] = y, x
        items = list(corrections.items())
        fast = _pattern_chunk((items, sub, factorial(n)))
        ref = _pattern_chunk_ref((items, sub, factorial(n)))
        assert fast == ref, n


def test_decompose_closed_parallel_determinism(monkeypatch):
    # chunked pool reduction must reproduce the serial result exactly
    from concurrent.futures import ProcessPoolExecutor

    from colortrace.engine import _canon_chunk, _expr_from_acc, _merge_accs

    q = Word(range(1, 7))
    monkeypatch.setenv("COLORTRACE_THREADS", "1")
    serial = decompose_closed(q)
    terms = list(closed_formula_terms(q))
    chunk = (len(terms) + 1) // 2
    jobs = [(terms[i : i + chunk], ()) for i in range(0, len(terms), chunk)]
    with ProcessPoolExecutor(max_workers=2) as pool:
        accs = list(pool.map(_canon_chunk, jobs))
    assert _expr_from_acc(_merge_accs(accs)) == serial


def _free_indices_once(e):
    for t in e.terms:
        frees = [x for _, idx in t.factors for x in idx if x > 0]
        assert len(frees) == len(set(frees)), t


def test_every_free_letter_appears_once_per_term():
    # multilinearity of the trace word carries through every route
    for n in (3, 4, 5, 6):
        q = Word(range(1, n + 1))
        _free_indices_once(decompose_closed(q))
        _free_indices_once(expand_eform(decompose_eform(q)))
        _free_indices_once(oracle_commutation(q))


def test_scrambled_letters_match_direct_trace():
    # the decomposition of a word with arbitrary distinct letters is the
    # relabeled image of the canonical one; check it against the matrix
    # trace directly and against the compact route
    su3 = build_algebra("su3")
    q = Word([3, 1, 4, 2])
    closed = decompose_closed(q)
    assert canonicalize(reduce_two_index_d(closed)) == expand_eform(
        decompose_eform(q)
    )
    rng = random.Random(6)
    from colortrace import direct_trace

    for _ in range(20):
        assign = {letter: rng.randint(1, su3.dim) for letter in q.letters}
        direct = direct_trace(su3, [assign[letter] for letter in q.letters])
        assert abs(evaluate(closed, su3, assign) - direct) <= 1e-10


def test_trace_query_cyclic_rotation_numeric():
    su2 = build_algebra("su2")
    q = w("1234")
    base = decompose_closed(q)
    rng = random.Random(4)
    for r in range(1, 4):
        rotated = Word(q.letters[r:] + q.letters[:r])
        other = decompose_closed(rotated)
        for _ in range(10):
            assign = {letter: rng.randint(1, su2.dim) for letter in q.letters}
            assert abs(
                evaluate(base, su2, assign) - evaluate(other, su2, assign)
            ) <= 1e-10
