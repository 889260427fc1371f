import random

import pytest

from gmconj.oracles import GroupHandle, brute_conjugator
from gmconj.seifert import (
    BoundaryCoords,
    SeifertContext,
    SeifertPiece,
    excluded_piece_reason,
)
from gmconj.words import Word, free_reduce, gen, parse_word, word

TREFOIL = SeifertPiece(orientable_base=True, genus=0, boundaries=1, b=0,
                       exceptional=((2, 1), (3, 1)))
NONOR = SeifertPiece(orientable_base=False, genus=1, boundaries=1, b=0,
                     exceptional=((2, 1),))
PIECES = [TREFOIL, NONOR]


def ctx(P):
    return SeifertContext(P)


def handle(C: SeifertContext) -> GroupHandle:
    return GroupHandle(
        alphabet=tuple(C.generators()),
        word_problem=C.word_problem,
        canonical_form=lambda w: (C.normalize(w).quotient.syllables, C.normalize(w).fiber),
    )


def rand_word(rng, C, length):
    letters = [(g, s) for g in C.generators() for s in (1, -1)]
    return Word([rng.choice(letters) for _ in range(length)])


def w(C, text):
    return parse_word(text, C.generators())


def test_piece_validation():
    with pytest.raises(ValueError):
        SeifertPiece(True, 0, 0, 0)
    with pytest.raises(ValueError):
        SeifertPiece(False, 0, 1, 0)
    with pytest.raises(ValueError):
        SeifertPiece(True, 0, 1, 0, ((1, 1),))
    with pytest.warns(UserWarning):
        SeifertPiece(True, 0, 1, 0, ((4, 2),))


def test_excluded_pieces():
    assert excluded_piece_reason(SeifertPiece(True, 0, 1, 0, ((2, 1),))) == "solid torus"
    assert excluded_piece_reason(SeifertPiece(True, 0, 2, 0)) == "thickened torus"
    assert excluded_piece_reason(SeifertPiece(True, 0, 1, 1, ((2, 1), (2, 1)))) \
        == "twisted I-bundle over the Klein bottle"
    assert excluded_piece_reason(SeifertPiece(False, 1, 1, 0)) \
        == "twisted I-bundle over the Klein bottle"
    assert excluded_piece_reason(TREFOIL) is None
    assert excluded_piece_reason(NONOR) is None


def test_trefoil_presentation():
    C = ctx(TREFOIL)
    pres = C.presentation()
    expected = {
        w(C, "c1 h c1^-1 h^-1"), w(C, "c2 h c2^-1 h^-1"), w(C, "d1 h d1^-1 h^-1"),
        w(C, "c1^2 h^-1"), w(C, "c2^3 h^-1"), w(C, "c1 c2 d1"),
    }
    assert set(pres.relators) == expected


def test_nonorientable_presentation_has_twisted_relator():
    C = ctx(NONOR)
    rels = set(C.presentation().relators)
    assert w(C, "a1 h a1^-1 h") in rels


def test_relators_normalize_to_identity():
    for P in PIECES:
        C = ctx(P)
        for r in C.presentation().relators:
            assert C.word_problem(r), r


def test_normalize_examples():
    C = ctx(TREFOIL)
    assert C.normalize(w(C, "c1^2 h^-1")).is_identity()
    assert C.normalize(w(C, "c1 c2 d1")).is_identity()
    x = C.normalize(w(C, "c2^4"))
    assert x.fiber == 1 and len(x.quotient) == 1


def test_normalize_is_homomorphism():
    rng = random.Random(41)
    for P in PIECES:
        C = ctx(P)
        for _ in range(150):
            w1 = rand_word(rng, C, rng.randrange(0, 11))
            w2 = rand_word(rng, C, rng.randrange(0, 11))
            assert C.mul(C.normalize(w1), C.normalize(w2)) == C.normalize(w1 * w2)


def test_fiber_additive_on_fiber_elements():
    C = ctx(NONOR)
    x = C.normalize(w(C, "h^3"))
    y = C.normalize(w(C, "h^-5"))
    z = C.mul(x, y)
    assert not z.quotient and z.fiber == -2


def test_eps():
    C = ctx(TREFOIL)
    assert C.eps(w(C, "c1 c2 d1 h")) == 1
    C2 = ctx(NONOR)
    assert C2.eps(w(C2, "a1")) == -1
    assert C2.eps(w(C2, "a1 c1 a1")) == 1
    # eps is the conjugation action on h
    for text in ("a1", "a1 c1", "c1"):
        v = w(C2, text)
        e = C2.eps(v)
        assert C2.word_problem(v * w(C2, "h") * ~v * w(C2, "h") ** (-e))


def test_boundary_membership():
    C = ctx(TREFOIL)
    m = C.boundary_membership(w(C, "d1 h^3"), 1)
    assert (m.alpha, m.beta) == (1, 3)
    assert C.boundary_membership(w(C, "c1"), 1) is None
    m = C.boundary_membership(w(C, "h^-2"), 1)
    assert (m.alpha, m.beta) == (0, -2)


def test_boundary_parallelism_examples():
    C = ctx(TREFOIL)
    s = C.boundary_parallelism(w(C, "c1 c2"), 1)
    assert s.coords() == [(-1, 0)]
    ((alpha, beta), g) = s.elements[0]
    assert C.word_problem(g * C.boundary_word(1, alpha, beta) * ~g * ~w(C, "c1 c2"))

    s = C.boundary_parallelism(w(C, "h^5"), 1)
    assert s.coords() == [(0, 5)]

    assert C.boundary_parallelism(w(C, "c1"), 1).is_empty()
    assert brute_conjugator(w(C, "c1"), w(C, "d1"), handle(C), 6) is None


def test_boundary_parallelism_nonorientable_fiber():
    C = ctx(NONOR)
    s = C.boundary_parallelism(w(C, "h^3"), 1)
    assert sorted(s.coords()) == [(0, -3), (0, 3)]
    for (alpha, beta), g in s.elements:
        assert C.word_problem(g * C.boundary_word(1, alpha, beta) * ~g * w(C, "h^-3"))


def test_parallelism_cardinality_and_witnesses_random():
    rng = random.Random(43)
    for P in PIECES:
        C = ctx(P)
        for _ in range(60):
            u = rand_word(rng, C, rng.randrange(0, 8))
            s = C.boundary_parallelism(u, 1)
            assert len(s.elements) <= 2
            for (alpha, beta), g in s.elements:
                z = C.boundary_word(1, alpha, beta)
                assert C.word_problem(g * z * ~g * ~u)


def test_two_cosets_line_example():
    C = ctx(TREFOIL)
    u = v = w(C, "c1")
    s = C.two_cosets(u, v, 1, 1)
    assert s.kind == "line" and s.eps == 1
    assert s.left_coords == (0, 0) and s.right_coords == (0, 0)
    for c, c2 in s.sample(10):
        assert C.word_problem(c * v * c2 * ~u)


def test_two_cosets_full_coset_example():
    C = ctx(TREFOIL)
    u, v = w(C, "d1 h"), Word()
    s = C.two_cosets(u, v, 1, 1)
    assert s.kind == "full_coset"
    for c, c2 in s.sample(3):
        assert C.word_problem(c * v * c2 * ~u)


def test_two_cosets_membership_mismatch():
    C = ctx(TREFOIL)
    assert C.two_cosets(w(C, "c1"), w(C, "d1"), 1, 1).is_empty()


def test_two_cosets_members_and_completeness_small():
    C = ctx(TREFOIL)
    cases = [("c1", "c1"), ("c1 c2", "c1 c2"), ("c2", "c2 h"), ("d1 h", "h"),
             ("c2 d1", "c2 d1 h^2"), ("c1", "c2")]
    bd = [C.boundary_word(1, a, b) for a in range(-2, 3) for b in range(-2, 3)]
    for ut, vt in cases:
        u, v = w(C, ut), w(C, vt)
        s = C.two_cosets(u, v, 1, 1)

        def key(pair):
            x, y = (C.normalize(pair[0]), C.normalize(pair[1]))
            return (x.quotient.syllables, x.fiber, y.quotient.syllables, y.fiber)

        members = {key(p) for p in s.sample(12)}
        for c, c2 in s.sample(6):
            assert C.word_problem(c * v * c2 * ~u)
        # completeness against exhaustive small boundary pairs
        for c in bd:
            for c2 in bd:
                if C.word_problem(c * v * c2 * ~u):
                    assert key((c, c2)) in members, (ut, vt, c, c2)


def test_conjugacy_examples():
    C = ctx(TREFOIL)
    assert C.conjugacy(w(C, "c1 h"), w(C, "c1")) is None
    assert brute_conjugator(w(C, "c1 h"), w(C, "c1"), handle(C), 8) is None
    assert C.conjugacy(w(C, "c1 c2"), w(C, "c1 c2")) == Word()
    g = C.conjugacy(w(C, "c2 c1 c2^-1"), w(C, "c1"))
    assert g is not None
    assert C.word_problem(g * w(C, "c1") * ~g * ~w(C, "c2 c1 c2^-1"))


def test_conjugacy_fiber_cases():
    C = ctx(TREFOIL)
    assert C.conjugacy(w(C, "h^2"), w(C, "h^2")) == Word()
    assert C.conjugacy(w(C, "h^2"), w(C, "h^-2")) is None
    C2 = ctx(NONOR)
    g = C2.conjugacy(w(C2, "h^2"), w(C2, "h^-2"))
    assert g is not None
    assert C2.word_problem(g * w(C2, "h^-2") * ~g * w(C2, "h^-2"))


def test_conjugacy_planted_random():
    rng = random.Random(47)
    for P in PIECES:
        C = ctx(P)
        for _ in range(80):
            v = rand_word(rng, C, rng.randrange(0, 8))
            t = rand_word(rng, C, rng.randrange(0, 6))
            u = free_reduce(t * v * ~t)
            g = C.conjugacy(u, v)
            assert g is not None, (P, v, t)
            assert C.word_problem(g * v * ~g * ~u)


def test_conjugacy_agrees_with_brute_force():
    rng = random.Random(53)
    for P in PIECES:
        C = ctx(P)
        h = handle(C)
        for _ in range(30):
            u = rand_word(rng, C, rng.randrange(0, 6))
            v = rand_word(rng, C, rng.randrange(0, 6))
            got = C.conjugacy(u, v)
            expect = brute_conjugator(u, v, h, 6)
            assert (got is None) == (expect is None), (P, u, v)
