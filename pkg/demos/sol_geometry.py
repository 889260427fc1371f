"""The two torus-glued cases that fall outside graphs of groups.

A torus bundle over the circle with Anosov monodromy, and two twisted
I-bundles over the Klein bottle glued along their boundary tori.  Both
fundamental groups are virtually Z^2 x| Z and get dedicated solvers.

Run from the repository root:

    python3 demos/sol_geometry.py
"""

from gmconj.sol import (
    DoubleKleinGroup,
    TorusBundleGroup,
    double_klein_conjugacy,
    torus_bundle_conjugacy,
)

print("torus bundle with monodromy [[2,1],[1,1]]")
G = TorusBundleGroup(((2, 1), (1, 1)))
g1 = ((1, 0), 1)    # x t
g2 = ((0, 0), 1)    # t
w = torus_bundle_conjugacy(g1, g2, G)
print(f"  x t ~ t via witness {w}: check",
      G.mul(w, G.mul(g1, G.inv(w))) == g2)
print("  t^3 ~ t^2 ?", torus_bundle_conjugacy(((0, 0), 3), ((0, 0), 2), G) is not None)
print("  translations (1,0) ~ (2,1) ?",
      torus_bundle_conjugacy(((1, 0), 0), ((2, 1), 0), G) is not None,
      "(the monodromy moves (1,0) to (2,1))")
print()

print("double Klein-bottle piece with gluing [[1,1],[0,1]]")
K = DoubleKleinGroup(((1, 1), (0, 1)))
print("  twist matrix of the glued torus subgroup:", K.M)
for target, expect in (((1, 3), True), ((2, 1), False)):
    w = double_klein_conjugacy(K.from_h((1, 1)), K.from_h(target), K)
    print(f"  (1,1) ~ {target} ?", w is not None, f"(expected {expect})")
    if w is not None:
        print("    witness checks:", K.conj(w, K.from_h((1, 1))) == K.from_h(target))
