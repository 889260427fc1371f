"""Tour of the graph-of-groups engine on two glued trefoil exteriors.

Run from the repository root:

    python3 demos/graph_manifold_tour.py
"""

from gmconj.graph import (
    Edge,
    GraphOfGroups,
    SeifertVertex,
    decide_conjugacy,
    gog_word_problem,
)
from gmconj.seifert import SeifertPiece
from gmconj.words import free_reduce, parse_word

# The trefoil knot exterior is a Seifert fibration over a disk with two
# exceptional fibers of orders 2 and 3.
TREFOIL = SeifertPiece(orientable_base=True, genus=0, boundaries=1, b=0,
                       exceptional=((2, 1), (3, 1)))

# Glue two copies so that the meridian of each side meets the fiber of the
# other.  The resulting closed manifold is a graph manifold that admits no
# global Seifert fibration.
G = GraphOfGroups(
    [SeifertVertex("v1", TREFOIL), SeifertVertex("v2", TREFOIL)],
    [Edge("e1", ("v1", 1), ("v2", 1), ((0, 1), (1, 0)))],
)

ALPHABET = [g for v in G.vertices.values() for g in v.generators()]
ALPHABET += [e.stable_letter() for e in G.edges.values()]


def w(text):
    return parse_word(text, ALPHABET)


def show(u_text, v_text):
    u, v = w(u_text), w(v_text)
    ans = decide_conjugacy(u, v, G)
    print(f"  {u_text!r} ~ {v_text!r} ?  {ans.conjugate}"
          f"  [certificate {ans.certificate}]")
    if ans.conjugate:
        g = ans.witness
        ok = gog_word_problem(free_reduce(g * v * ~g * ~u), G)
        print(f"    witness verified by the word problem: {ok}")


print("generators of v1:", " ".join(str(g) for g in G.vertices["v1"].generators()))
print("the tree edge e1 kills its stable letter t_e1\n")

print("word problem examples:")
print("  fiber relation across the edge:",
      gog_word_problem(w("t_e1 v2.h t_e1^-1 v1.d1^-1"), G))
print("  a fiber alone is nontrivial:", not gog_word_problem(w("v1.h"), G), "\n")

print("conjugacy queries:")
show("v1.c1 v1.c2", "v2.h^-1")      # positive, crosses the edge
show("v1.h", "v2.h")                # fibers of different pieces: never conjugate
show("v1.c2 v1.c1 v1.c2^-1", "v1.c1")  # plain inner conjugates in one piece
