import random

from speclab.characters import (
    RminVerdict,
    TracePoly,
    basis_word,
    character_values,
    eval_trace_poly,
    random_exact_rep,
    rmin_pairs,
    rmin_test,
    subset_name,
    trace_poly,
)
import speclab.surface_group as sg

F2 = sg.Presentation(genus=1, punctures=1)


def _rand_word(rng, m, length):
    letters = [k for k in range(1, m + 1)] + [-k for k in range(1, m + 1)]
    w = []
    while len(w) < length:
        x = rng.choice(letters)
        if w and w[-1] == -x:
            continue
        w.append(x)
    return tuple(w)


def test_subset_name():
    assert subset_name(0b1) == "t{1}"
    assert subset_name(0b11) == "t{1,2}"
    assert subset_name(0b101) == "t{1,3}"


def test_basis_word():
    assert basis_word(0b1) == (1,)
    assert basis_word(0b110) == (2, 3)


def test_single_generator_poly():
    p = trace_poly((1,), 2)
    assert p == TracePoly.var(0b1)
    rep = random_exact_rep(2, random.Random(0))
    assert eval_trace_poly(p, rep) == rep.matrices[0].tr()


def test_commutator_polynomial():
    # tr[A,B] = t1^2 + t2^2 + t12^2 - t1 t2 t12 - 2
    t1, t2, t12 = TracePoly.var(0b1), TracePoly.var(0b10), TracePoly.var(0b11)
    expected = t1 * t1 + t2 * t2 + t12 * t12 - t1 * t2 * t12 - TracePoly.const(2)
    p = trace_poly((1, 2, -1, -2), 2)
    assert p == expected
    # exact oracle: evaluate both sides at 200 random rational reps
    rng = random.Random(1)
    for _ in range(200):
        rep = random_exact_rep(2, rng)
        m = sg.evaluate((1, 2, -1, -2), rep)
        assert eval_trace_poly(p, rep) == m.tr()


def test_inverse_and_conjugation_invariance():
    rng = random.Random(2)
    for _ in range(30):
        w = _rand_word(rng, 2, rng.randint(2, 7))
        u = _rand_word(rng, 2, rng.randint(1, 3))
        wi = sg.invert(w)
        conj = sg.free_reduce(u + w + sg.invert(u))
        p = trace_poly(w, 2)
        assert trace_poly(wi, 2) == p
        assert trace_poly(conj, 2) == p


def test_degree_bound():
    rng = random.Random(3)
    for _ in range(30):
        w = _rand_word(rng, 3, rng.randint(1, 8))
        assert trace_poly(w, 3).total_degree() <= len(w)


def test_soundness_random_words_exact():
    rng = random.Random(4)
    for m in (2, 3):
        for _ in range(60):
            w = _rand_word(rng, m, rng.randint(1, 10))
            rep = random_exact_rep(m, rng)
            assert eval_trace_poly(trace_poly(w, m), rep) == sg.evaluate(w, rep).tr()


def test_character_values_cover_basis():
    rep = random_exact_rep(3, random.Random(5))
    cv = character_values(rep, 3)
    assert set(cv) == set(range(1, 8))
    assert cv[0b1] == rep.matrices[0].tr()
    assert cv[0b111] == sg.evaluate((1, 2, 3), rep).tr()


def test_rmin_generators_distinct():
    v = rmin_test((1,), (2,), 2, seed=0)
    assert v.kind == RminVerdict.DISTINCT
    assert v.witness_rep is not None
    t1, t2 = v.traces
    assert t1 != t2


def test_rmin_conjugates_equal():
    assert rmin_test((1, 2), (2, 1), 2, seed=0).kind == RminVerdict.EQUAL


def test_rmin_inverse_equal():
    assert rmin_test((1,), (-1,), 2, seed=0).kind == RminVerdict.EQUAL


def test_rmin_all_length_two_classes():
    classes = sg.enumerate_classes(F2, 2)
    assert len(classes) == 12
    key = {k: i for i, k in enumerate(classes)}
    a = sg.canonical_class((1,), F2)
    ai = sg.canonical_class((-1,), F2)
    b = sg.canonical_class((2,), F2)
    assert rmin_test(a.word, ai.word, 2, seed=1).kind == RminVerdict.EQUAL
    assert rmin_test(a.word, b.word, 2, seed=1).kind == RminVerdict.DISTINCT
    # ab and ba share a canonical key already
    assert sg.canonical_class((1, 2), F2) == sg.canonical_class((2, 1), F2)
    assert a in key and b in key


def test_nontrivial_minimal_pair_exists():
    # non-conjugate classes (inverse-merged) with identical character polynomial
    classes = sg.enumerate_classes(F2, 8, merge_inverse=True)
    groups = {}
    for k in classes:
        groups.setdefault(trace_poly(k.word, 2).text(), []).append(k)
    nontrivial = [v for v in groups.values() if len(v) > 1]
    assert nontrivial
    w1, w2 = nontrivial[0][0].word, nontrivial[0][1].word
    assert rmin_test(w1, w2, 2, seed=2).kind == RminVerdict.EQUAL


def test_rmin_pairs_partition():
    classes = sg.enumerate_classes(F2, 2)
    partition, flagged = rmin_pairs(classes, 2, seed=0, n_reps=8)
    assert not flagged
    covered = [k for block in partition for k in block]
    assert sorted(covered, key=str) == sorted(classes, key=str)
    blocks = {frozenset(b) for b in partition}
    a = sg.canonical_class((1,), F2)
    ai = sg.canonical_class((-1,), F2)
    assert any(a in b and ai in b for b in blocks)


def test_poly_text_canonical():
    p = trace_poly((1, 2, -1, -2), 2)
    q = trace_poly((2, 1, -2, -1), 2)  # inverse commutator, same trace
    assert p.text() == q.text()
    assert p.text() == trace_poly((1, 2, -1, -2), 2).text()
