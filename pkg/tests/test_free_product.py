import itertools
import random

import pytest

from gmconj.free_product import (
    IDENTITY,
    FreeProductNF,
    FreeProductOfCyclics,
    centralizer_generator,
    conjugacy,
    conjugate_to_power,
    cyclic_reduce_nf,
    double_coset,
    nf,
    nf_inv,
    nf_mul,
    nf_pow,
    nf_to_word,
    normalize,
)
from gmconj.oracles import GroupHandle, brute_conjugator, rewrite_reachable
from gmconj.words import Word, gen, word

x, y = gen("x"), gen("y")
G23 = FreeProductOfCyclics(((x, 2), (y, 3)))       # <x|x^2> * <y|y^3>
Ginf3 = FreeProductOfCyclics(((x, None), (y, 3)))  # <x|inf> * <y|y^3>


def handle(G):
    return GroupHandle(
        alphabet=(x, y),
        word_problem=lambda w: normalize(w, G) == IDENTITY,
        canonical_form=lambda w: normalize(w, G).syllables,
    )


def rand_nf(rng, G, max_len=12):
    letters = [(g, s) for g, _ in G.factors for s in (1, -1)]
    w = Word([rng.choice(letters) for _ in range(rng.randrange(0, max_len + 1))])
    return normalize(w, G)


def test_normalize_examples():
    # x y^4 x -> x y x
    w = word((x, 1)) * word((y, 1)) ** 4 * word((x, 1))
    assert normalize(w, G23) == nf(G23, [(0, 1), (1, 1), (0, 1)])
    assert normalize(word((x, 1), (x, 1)), G23) == IDENTITY
    assert normalize(word((y, -1)), G23) == nf(G23, [(1, 2)])


def test_normalize_is_multiplicative():
    rng = random.Random(5)
    for G in (G23, Ginf3):
        for _ in range(100):
            u, v = rand_nf(rng, G), rand_nf(rng, G)
            assert nf_mul(G, u, v) == normalize(nf_to_word(G, u) * nf_to_word(G, v), G)


def test_conjugacy_rotation_example():
    u = normalize(word((x, 1), (y, 1)), G23)
    v = normalize(word((y, 1), (x, 1)), G23)
    w = conjugacy(G23, u, v)
    assert w == nf(G23, [(1, 2)])  # y^-1 = y^2
    assert nf_mul(G23, w, v, nf_inv(G23, w)) == u


def test_conjugacy_distinct_factors():
    u = normalize(word((x, 1)), G23)
    v = normalize(word((y, 1)), G23)
    assert conjugacy(G23, u, v) is None
    assert brute_conjugator(word((x, 1)), word((y, 1)), handle(G23), 6) is None


def test_conjugacy_identity_witness():
    u = normalize(word((x, 1)), G23)
    assert conjugacy(G23, u, u) == IDENTITY


def test_conjugacy_witness_law_random():
    rng = random.Random(17)
    for G in (G23, Ginf3):
        for _ in range(200):
            v = rand_nf(rng, G)
            g = rand_nf(rng, G, 6)
            u = nf_mul(G, g, v, nf_inv(G, g))
            w = conjugacy(G, u, v)
            assert w is not None
            assert nf_mul(G, w, v, nf_inv(G, w)) == u


def test_conjugacy_agrees_with_brute_force_small():
    h = handle(G23)
    elems = set()
    letters = [(x, 1), (x, -1), (y, 1), (y, -1)]
    for n in range(0, 5):
        for combo in itertools.product(letters, repeat=n):
            e = normalize(Word(combo), G23)
            if len(e) <= 4:
                elems.add(e)
    elems = sorted(elems, key=lambda e: e.syllables)[:40]
    for u in elems[:14]:
        for v in elems[:14]:
            got = conjugacy(G23, u, v)
            expect = brute_conjugator(nf_to_word(G23, u), nf_to_word(G23, v), h, 8)
            assert (got is None) == (expect is None)
            if got is not None:
                assert nf_mul(G23, got, v, nf_inv(G23, got)) == u


def test_conjugate_to_power_examples():
    u = normalize(word((y, 1), (x, 1), (y, -1)), Ginf3)
    d = normalize(word((x, 1)), Ginf3)
    alpha, w = conjugate_to_power(Ginf3, u, d)
    assert alpha == 1 and w == nf(Ginf3, [(1, 1)])

    xy = normalize(word((x, 1), (y, 1)), G23)
    u2 = nf_pow(G23, xy, 2)
    alpha, w = conjugate_to_power(G23, u2, xy)
    assert alpha == 2 and w == IDENTITY

    assert conjugate_to_power(G23, normalize(word((y, 1)), G23), xy) is None


def test_conjugate_to_power_rejects_finite_order():
    with pytest.raises(ValueError):
        conjugate_to_power(G23, IDENTITY, normalize(word((x, 1)), G23))


def test_conjugate_to_power_alpha_bound():
    rng = random.Random(23)
    d = normalize(word((x, 1), (y, 1)), G23)
    for _ in range(40):
        alpha0 = rng.randrange(-3, 4)
        g = rand_nf(rng, G23, 4)
        u = nf_mul(G23, g, nf_pow(G23, d, alpha0), nf_inv(G23, g))
        res = conjugate_to_power(G23, u, d)
        assert res is not None
        alpha, w = res
        cu, _ = cyclic_reduce_nf(G23, u)
        cd, _ = cyclic_reduce_nf(G23, d)
        assert abs(alpha) * len(cd) <= max(len(cu), 0) or alpha == 0
        assert nf_mul(G23, w, nf_pow(G23, d, alpha), nf_inv(G23, w)) == u


def test_double_coset_examples():
    u = normalize(word((x, 1), (y, 1)), Ginf3)
    v = normalize(word((y, 1)), Ginf3)
    d = normalize(word((x, 1)), Ginf3)
    assert double_coset(Ginf3, u, v, d, d) == (1, 0)

    v2 = normalize(word((y, 1)), Ginf3)
    assert double_coset(Ginf3, v2, v2, d, d) == (0, 0)

    u3 = normalize(word((y, -1)), Ginf3)
    assert double_coset(Ginf3, u3, v2, d, d) is None


def test_double_coset_detects_power_violation():
    d = normalize(word((x, 1)), Ginf3)
    with pytest.raises(ValueError):
        double_coset(Ginf3, d, nf_pow(Ginf3, d, 2), d, d)


def test_centralizer_generator():
    xy = normalize(word((x, 1), (y, 1)), G23)
    assert centralizer_generator(G23, nf_pow(G23, xy, 3)) == xy
    assert centralizer_generator(G23, normalize(word((y, 1), (y, 1)), G23)) == nf(G23, [(1, 1)])
    d = normalize(word((x, 1)), Ginf3)
    assert centralizer_generator(Ginf3, d) == d
    with pytest.raises(ValueError):
        centralizer_generator(G23, IDENTITY)


def test_centralizer_commutes():
    rng = random.Random(31)
    for G in (G23, Ginf3):
        for _ in range(60):
            v = rand_nf(rng, G)
            if not v:
                continue
            z = centralizer_generator(G, v)
            assert nf_mul(G, z, v) == nf_mul(G, v, z)


def test_normal_form_vs_rewrite_oracle():
    rng = random.Random(37)
    relators = [word((x, 1)) ** 2, word((y, 1)) ** 3]
    for _ in range(40):
        w1 = Word([rng.choice([(x, 1), (x, -1), (y, 1), (y, -1)])
                   for _ in range(rng.randrange(0, 8))])
        # build an equal word by inserting relators
        letters = list(w1.letters)
        for _ in range(rng.randrange(0, 3)):
            r = rng.choice(relators + [~r for r in relators])
            pos = rng.randrange(0, len(letters) + 1)
            letters[pos:pos] = list(r.letters)
        w2 = Word(letters)
        assert normalize(w1, G23) == normalize(w2, G23)
        assert rewrite_reachable(w1, w2, relators, 10)
