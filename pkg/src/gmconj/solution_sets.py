"""Structured solution sets for boundary parallelism and 2-cosets problems.

Produced by the klein/seifert/hyperbolic solvers and consumed by the
graph engine. A negative or empty answer carries an `exact` flag: False
means the emptiness was established only by a bounded search.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .words import Word, free_reduce

Coords = Tuple[int, int]


@dataclass(frozen=True)
class ParallelismSet:
    """Boundary elements conjugate to a given element, with witnesses.

    Each entry is ((alpha, beta), witness): coords in the boundary basis,
    and a word g with  element == g * boundary_element * g^-1.
    """

    elements: Tuple[Tuple[Coords, Word], ...] = ()
    exact: bool = True

    def __post_init__(self):
        if len(self.elements) > 2:
            raise ValueError("parallelism sets have at most two elements")

    def is_empty(self) -> bool:
        return not self.elements

    def coords(self):
        return [c for c, _ in self.elements]


EMPTY_PARALLELISM = ParallelismSet()


@dataclass(frozen=True)
class CosetSolutionSet:
    """Solutions (c, c') of u = c * v * c' with c, c' in given boundary subgroups.

    kind:
      empty        no solution
      singleton    exactly base
      line         {(base0 * s0^n, base1 * s1^(-eps*n)) : n in Z}
      klein_family {(base0 * g1^n * g2^p, g1^-n * g2^p) : n, p in Z}
      full_coset   {(t * base0, t^-1) : t = g1^i * g2^j}
    where (s0, s1) = step and (g1, g2) = basis.
    """

    kind: str
    exact: bool = True
    base: Optional[Tuple[Word, Word]] = None
    step: Optional[Tuple[Word, Word]] = None
    eps: int = 1
    basis: Optional[Tuple[Word, Word]] = None
    left_coords: Optional[Coords] = None   # coords of base[0] in the left boundary basis
    right_coords: Optional[Coords] = None  # coords of base[1] in the right boundary basis

    def __post_init__(self):
        kinds = ("empty", "singleton", "line", "klein_family", "full_coset")
        if self.kind not in kinds:
            raise ValueError(f"bad solution set kind {self.kind!r}")
        if self.kind != "empty" and self.base is None:
            raise ValueError("non-empty solution set needs a base pair")

    def is_empty(self) -> bool:
        return self.kind == "empty"

    def member(self, *params) -> Tuple[Word, Word]:
        if self.kind == "empty":
            raise ValueError("empty solution set has no members")
        if self.kind == "singleton":
            if params:
                raise ValueError("singleton takes no parameters")
            return self.base
        if self.kind == "line":
            (n,) = params
            s0, s1 = self.step
            return (free_reduce(self.base[0] * s0 ** n),
                    free_reduce(self.base[1] * s1 ** (-self.eps * n)))
        if self.kind == "klein_family":
            n, p = params
            g1, g2 = self.basis
            return (free_reduce(self.base[0] * g1 ** n * g2 ** p),
                    free_reduce(g1 ** (-n) * g2 ** p))
        # full_coset
        i, j = params
        g1, g2 = self.basis
        t = free_reduce(g1 ** i * g2 ** j)
        return free_reduce(t * self.base[0]), free_reduce(~t)

    def sample(self, bound: int):
        """Deterministic finite sample of members for verification."""
        if self.kind == "empty":
            return []
        if self.kind == "singleton":
            return [self.member()]
        rng1 = range(-bound, bound + 1)
        if self.kind == "line":
            return [self.member(n) for n in rng1]
        return [self.member(i, j) for i in rng1 for j in rng1]


EMPTY_COSETS = CosetSolutionSet("empty")
