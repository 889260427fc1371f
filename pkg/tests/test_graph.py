import random

import pytest

from gmconj.graph import (
    Edge,
    GraphOfGroups,
    KleinVertex,
    SeifertVertex,
    brute_graph_conjugator,
    cyclically_reduce,
    decide_conjugacy,
    element_key,
    form_of_word,
    gog_word_problem,
    label_word,
    to_presentation,
    validate_graph,
)
from gmconj.seifert import SeifertPiece
from gmconj.words import Word, free_reduce, parse_word

TREFOIL = SeifertPiece(orientable_base=True, genus=0, boundaries=1, b=0,
                       exceptional=((2, 1), (3, 1)))
TREFOIL2 = SeifertPiece(orientable_base=True, genus=0, boundaries=2, b=0,
                        exceptional=((2, 1), (3, 1)))
SWAP = ((0, 1), (1, 0))


def two_trefoil_graph():
    return GraphOfGroups(
        [SeifertVertex("v1", TREFOIL), SeifertVertex("v2", TREFOIL)],
        [Edge("e1", ("v1", 1), ("v2", 1), SWAP)],
    )


def self_loop_graph():
    return GraphOfGroups(
        [SeifertVertex("v1", TREFOIL2)],
        [Edge("e1", ("v1", 1), ("v1", 2), SWAP)],
    )


G2 = two_trefoil_graph()
GL = self_loop_graph()


def alphabet(G):
    out = []
    for v in G.vertices.values():
        out.extend(v.generators())
    for e in G.edges.values():
        out.append(e.stable_letter())
    return out


def w(text, G=G2):
    return parse_word(text, alphabet(G))


def rand_loop(rng, G, base, length):
    """Random valid loop word at base: vertex letters and edge crossings."""
    letters = []
    cur = base
    for _ in range(length):
        moves = [(g, s, cur) for g in G.vertices[cur].generators() for s in (1, -1)]
        for e in G.edges.values():
            if e.origin[0] == cur:
                moves.append((e.stable_letter(), 1, e.end[0]))
            if e.end[0] == cur:
                moves.append((e.stable_letter(), -1, e.origin[0]))
        g, s, cur = rng.choice(moves)
        letters.append((g, s))
    # walk home along edges
    while cur != base:
        for e in G.edges.values():
            if e.origin[0] == cur and e.end[0] == base:
                letters.append((e.stable_letter(), 1))
                cur = base
                break
            if e.end[0] == cur and e.origin[0] == base:
                letters.append((e.stable_letter(), -1))
                cur = base
                break
        else:
            raise AssertionError("no edge home")
    return free_reduce(Word(letters))


# --- validation --------------------------------------------------------------

def test_two_trefoil_valid():
    assert validate_graph(G2) == []
    assert G2.tree_edges == frozenset({"e1"})


def test_identity_gluing_identifies_fibers():
    with pytest.raises(ValueError, match="identifies fibers"):
        GraphOfGroups(
            [SeifertVertex("v1", TREFOIL), SeifertVertex("v2", TREFOIL)],
            [Edge("e1", ("v1", 1), ("v2", 1), ((1, 0), (0, 1)))],
        )


def test_single_vertex_no_edges_valid():
    G = GraphOfGroups([SeifertVertex("v1", TREFOIL)], [])
    assert validate_graph(G) == []


def test_bad_determinant():
    with pytest.raises(ValueError, match="determinant"):
        GraphOfGroups(
            [SeifertVertex("v1", TREFOIL), SeifertVertex("v2", TREFOIL)],
            [Edge("e1", ("v1", 1), ("v2", 1), ((2, 0), (0, 1)))],
        )


def test_dangling_boundary_index():
    with pytest.raises(ValueError, match="dangling"):
        GraphOfGroups(
            [SeifertVertex("v1", TREFOIL), SeifertVertex("v2", TREFOIL)],
            [Edge("e1", ("v1", 3), ("v2", 1), SWAP)],
        )


def test_all_klein_graph_rejected():
    with pytest.raises(ValueError, match="[Ss][Oo][Ll]"):
        GraphOfGroups(
            [KleinVertex("k1"), KleinVertex("k2")],
            [Edge("e1", ("k1", 1), ("k2", 1), ((1, 1), (1, 2)))],
        )


def test_excluded_piece_rejected_as_vertex():
    solid = SeifertPiece(True, 0, 1, 0, ((2, 1),))
    with pytest.raises(ValueError, match="solid torus"):
        SeifertVertex("v1", solid)


def test_klein_seifert_graph_valid():
    G = GraphOfGroups(
        [KleinVertex("k1"), SeifertVertex("v1", TREFOIL)],
        [Edge("e1", ("k1", 1), ("v1", 1), ((1, 1), (1, 0)))],
    )
    assert validate_graph(G) == []


def test_klein_fiber_slope_checked():
    # a^2-slope of the Klein piece would land on the Seifert fiber
    with pytest.raises(ValueError, match="identifies fibers"):
        GraphOfGroups(
            [KleinVertex("k1"), SeifertVertex("v1", TREFOIL)],
            [Edge("e1", ("k1", 1), ("v1", 1), ((0, 1), (1, 0)))],
        )


# --- presentation ------------------------------------------------------------

def test_presentation_relators():
    pres = to_presentation(G2)
    rels = set(pres.relators)
    t = w("t_e1")
    # tree edge is killed
    assert t in rels
    # basis (1,0) at v1 is d1^(1); the swap sends it to h^(2)
    assert free_reduce(t * w("v2.h") * ~t * w("v1.d1^-1")) in rels
    assert free_reduce(t * w("v2.d1") * ~t * w("v1.h^-1")) in rels


def test_presentation_relators_are_trivial_words():
    # the bare tree-letter relator is not a loop word, so it is checked apart
    for rel in to_presentation(G2).relators:
        if rel == w("t_e1"):
            continue
        assert gog_word_problem(rel, G2), rel


def test_edgeless_presentation_is_piece_union():
    G = GraphOfGroups([SeifertVertex("v1", TREFOIL)], [])
    pres = to_presentation(G)
    assert set(pres.relators) == set(G.vertices["v1"].relators())


# --- forms and the word problem ----------------------------------------------

def test_form_of_word_no_stable_letters():
    f = form_of_word(w("v1.c1 v1.c2"), G2)
    assert f.base == "v1" and f.length == 0


def test_form_of_word_segments():
    f = form_of_word(w("v1.c1 t_e1 v2.c2 t_e1^-1"), G2)
    assert f.length == 2
    assert f.steps == (("e1", 1), ("e1", -1))
    assert f.labels[1] == w("v2.c2")


def test_form_of_word_wrong_vertex():
    with pytest.raises(ValueError, match="belongs to vertex"):
        form_of_word(w("v1.c1 v2.c2"), G2)


def test_form_of_word_not_a_loop():
    with pytest.raises(ValueError, match="not a loop"):
        form_of_word(w("v1.c1 t_e1"), G2)


def test_label_roundtrip():
    word = w("v1.c1 t_e1 v2.c2 t_e1^-1 v1.d1")
    assert label_word(G2, form_of_word(word, G2)) == word


def test_word_problem_relator_and_fiber():
    assert gog_word_problem(w("t_e1 v2.h t_e1^-1 v1.d1^-1"), G2)
    assert not gog_word_problem(w("v1.h"), G2)
    assert not gog_word_problem(w("t_e1 v2.c1 t_e1^-1 v1.d1^-1"), G2)


def test_word_problem_random_ww_inverse():
    rng = random.Random(3)
    for _ in range(40):
        word = rand_loop(rng, G2, "v1", rng.randrange(0, 9))
        assert gog_word_problem(free_reduce(word * ~word), G2)


def test_cyclic_reduction_pinch():
    # t h^(2) t^-1 pinches to d1^(1): length drops to 0
    f = form_of_word(w("v1.c1 t_e1 v2.h t_e1^-1"), G2)
    out, conj = cyclically_reduce(f, G2)
    assert out.length == 0
    got = free_reduce(conj * label_word(G2, out) * ~conj)
    assert gog_word_problem(free_reduce(got * ~label_word(G2, f)), G2)


def test_cyclic_reduction_rotation():
    # reducible only after rotating the trailing stable letter to the front
    f = form_of_word(w("t_e1 v2.c1 t_e1^-1 v1.c2 t_e1 v2.h^2 t_e1^-1"), G2)
    out, conj = cyclically_reduce(f, G2)
    assert out.length == 2
    got = free_reduce(conj * label_word(G2, out) * ~conj)
    assert gog_word_problem(free_reduce(got * ~label_word(G2, f)), G2)


def test_cyclic_reduction_already_reduced():
    f = form_of_word(w("v1.c1 t_e1 v2.c1 t_e1^-1"), G2)
    out, conj = cyclically_reduce(f, G2)
    assert out.length == 2 and conj == Word()


def test_reduction_length_invariance_random():
    rng = random.Random(5)
    for _ in range(30):
        word = rand_loop(rng, G2, "v1", rng.randrange(1, 8))
        g = rand_loop(rng, G2, "v1", rng.randrange(0, 6))
        f1, _ = cyclically_reduce(form_of_word(word, G2), G2)
        f2, _ = cyclically_reduce(form_of_word(free_reduce(g * word * ~g), G2), G2)
        assert f1.length == f2.length


# --- conjugacy ---------------------------------------------------------------

def test_conjugacy_worked_example_positive():
    ans = decide_conjugacy(w("v1.c1 v1.c2"), w("v2.h^-1"), G2)
    assert ans.conjugate and ans.certificate == "ii"
    assert len(ans.path) <= 4
    g = ans.witness
    assert gog_word_problem(free_reduce(g * w("v2.h^-1") * ~g * ~w("v1.c1 v1.c2")), G2)


def test_conjugacy_worked_example_negative():
    ans = decide_conjugacy(w("v1.h"), w("v2.h"), G2)
    assert not ans.conjugate and ans.certificate == "exact-negative"
    assert brute_graph_conjugator(w("v1.h"), w("v2.h"), G2, 6) is None


def test_conjugacy_identity_case():
    u = w("v1.c1 t_e1 v2.c2 t_e1^-1")
    ans = decide_conjugacy(u, u, G2)
    assert ans.conjugate
    g = ans.witness
    assert gog_word_problem(free_reduce(g * u * ~g * ~u), G2)


def test_conjugacy_same_vertex_pieces():
    ans = decide_conjugacy(w("v1.c2 v1.c1 v1.c2^-1"), w("v1.c1"), G2)
    assert ans.conjugate and ans.certificate == "i"


def test_conjugacy_length_mismatch():
    ans = decide_conjugacy(w("v1.c1"), w("v1.c1 t_e1 v2.c1 t_e1^-1"), G2)
    assert not ans.conjugate and ans.certificate == "exact-negative"


def test_conjugacy_positive_length_planted():
    rng = random.Random(11)
    for _ in range(25):
        word = rand_loop(rng, G2, "v1", rng.randrange(1, 8))
        g = rand_loop(rng, G2, "v1", rng.randrange(0, 6))
        u = free_reduce(g * word * ~g)
        ans = decide_conjugacy(u, word, G2)
        assert ans.conjugate, (word, g)
        gw = ans.witness
        assert gog_word_problem(free_reduce(gw * word * ~gw * ~u), G2)


def test_conjugacy_rotation_needed():
    v = w("v1.c1 t_e1 v2.c1 t_e1^-1 v1.c2 t_e1 v2.c2 t_e1^-1")
    q = w("v1.c1 t_e1 v2.c1 t_e1^-1")
    u = free_reduce(~q * v * q)  # a cyclic rotation of v
    ans = decide_conjugacy(u, v, G2)
    assert ans.conjugate and ans.certificate == "iii"
    g = ans.witness
    assert gog_word_problem(free_reduce(g * v * ~g * ~u), G2)


def test_conjugacy_length_two_negative():
    u = w("v1.c1 t_e1 v2.c1 t_e1^-1")
    v = w("v1.c2 t_e1 v2.c2 t_e1^-1")
    ans = decide_conjugacy(u, v, G2)
    assert (ans.conjugate
            or ans.certificate == "exact-negative")
    expect = brute_graph_conjugator(u, v, G2, 5)
    assert ans.conjugate == (expect is not None)


def test_self_loop_graph_conjugacy():
    rng = random.Random(13)
    for _ in range(15):
        word = rand_loop(rng, GL, "v1", rng.randrange(1, 7))
        g = rand_loop(rng, GL, "v1", rng.randrange(0, 5))
        u = free_reduce(g * word * ~g)
        ans = decide_conjugacy(u, word, GL)
        assert ans.conjugate, (word, g)
        gw = ans.witness
        assert gog_word_problem(free_reduce(gw * word * ~gw * ~u), GL)


def test_self_loop_stable_letter_not_in_tree():
    assert GL.tree_edges == frozenset()
    assert not gog_word_problem(w("t_e1", GL), GL)


def test_element_key_separates_and_merges():
    k1 = element_key(G2, w("v1.c1 t_e1 v2.h t_e1^-1"))
    k2 = element_key(G2, w("v1.c1 v1.d1"))
    assert k1 == k2  # equal group elements
    assert element_key(G2, w("v1.c1")) != element_key(G2, w("v1.c2"))


def test_brute_agreement_random():
    rng = random.Random(17)
    for _ in range(20):
        u = rand_loop(rng, G2, "v1", rng.randrange(0, 6))
        v = rand_loop(rng, G2, "v1", rng.randrange(0, 6))
        ans = decide_conjugacy(u, v, G2)
        expect = brute_graph_conjugator(u, v, G2, 4)
        if expect is not None:
            assert ans.conjugate, (u, v, expect)
        if ans.conjugate and len(ans.witness) <= 4:
            pass  # brute may still miss longer spellings; positive is verified
