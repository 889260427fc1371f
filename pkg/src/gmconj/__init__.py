"""gmconj: conjugacy with explicit witnesses in graph-manifold groups.

The group is described as a graph of groups whose vertex groups are
Seifert fibered piece groups, the Klein-bottle I-bundle group, or
hyperbolic piece groups queried through exact matrix representations.
"""

__version__ = "0.1.0"
