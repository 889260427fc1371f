"""Closed-form algebra for the twisted I-bundle over the Klein bottle.

Group <a, b | a b a^-1 = b^-1>; every element is uniquely a^n b^m, and
(n1, m1) * (n2, m2) = (n1 + n2, (-1)^n2 * m1 + m2).  The boundary torus
subgroup is <a^2, b>.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

from .solution_sets import EMPTY_COSETS, CosetSolutionSet, ParallelismSet
from .words import GeneratorId, Word, word as make_word


@dataclass(frozen=True)
class KleinNF:
    n: int
    m: int

    def __mul__(self, other: "KleinNF") -> "KleinNF":
        sign = -1 if other.n % 2 else 1
        return KleinNF(self.n + other.n, sign * self.m + other.m)

    def __invert__(self) -> "KleinNF":
        sign = -1 if self.n % 2 else 1
        return KleinNF(-self.n, -sign * self.m)

    def __pow__(self, k: int) -> "KleinNF":
        out = KleinNF(0, 0)
        step = self if k >= 0 else ~self
        for _ in range(abs(k)):
            out = out * step
        return out

    def conj(self, g: "KleinNF") -> "KleinNF":
        return g * self * ~g


IDENTITY = KleinNF(0, 0)


def klein_gens(namespace: str = "") -> Tuple[GeneratorId, GeneratorId]:
    return GeneratorId(namespace, "a"), GeneratorId(namespace, "b")


def klein_normalize(w: Word, namespace: str = "") -> KleinNF:
    a, b = klein_gens(namespace)
    out = IDENTITY
    for g, s in w:
        if g == a:
            out = out * KleinNF(s, 0)
        elif g == b:
            out = out * KleinNF(0, s)
        else:
            raise ValueError(f"unknown generator {g} for the Klein piece")
    return out


def klein_word(x: KleinNF, namespace: str = "") -> Word:
    a, b = klein_gens(namespace)
    return make_word(*([(a, 1 if x.n > 0 else -1)] * abs(x.n) +
                       [(b, 1 if x.m > 0 else -1)] * abs(x.m)))


def klein_conjugate_classes_match(u: KleinNF, v: KleinNF) -> bool:
    if u.n != v.n:
        return False
    if u.m == v.m or u.m == -v.m:
        return True
    return u.n % 2 == 1 and (u.m - v.m) % 2 == 0


def klein_conjugacy(u: KleinNF, v: KleinNF) -> Optional[KleinNF]:
    """Witness g with g v g^-1 == u, or None."""
    if not klein_conjugate_classes_match(u, v):
        return None
    cap = abs(u.m) + abs(v.m) + 2
    for k in range(0, cap + 1):
        for kk in ((k,) if k == 0 else (k, -k)):
            for g in (KleinNF(0, kk), KleinNF(1, kk)):
                if v.conj(g) == u:
                    return g
    raise AssertionError("criterion satisfied but witness scan failed")


def klein_boundary_membership(u: KleinNF) -> Optional[Tuple[int, int]]:
    """Coords (p, q) with u = (a^2)^p b^q, or None when u is not in the torus."""
    if u.n % 2:
        return None
    return (u.n // 2, u.m)


def klein_boundary_parallelism(u: KleinNF, namespace: str = "") -> ParallelismSet:
    """All boundary elements conjugate to u, in (a^2, b) coords, with witnesses."""
    if u.n % 2:
        # odd a-exponent never enters the index-2 boundary-containing subgroup
        return ParallelismSet((), exact=True)
    a, _ = klein_gens(namespace)
    p = u.n // 2
    elems = [((p, u.m), Word())]
    if u.m != 0:
        elems.append(((p, -u.m), make_word((a, 1))))
    return ParallelismSet(tuple(elems), exact=True)


def klein_two_cosets(u: KleinNF, v: KleinNF, namespace: str = "") -> CosetSolutionSet:
    """Solutions (c, c') in T x T of u = c v c', T = <a^2, b>."""
    a, b = klein_gens(namespace)
    a2 = make_word((a, 1), (a, 1))
    bw = make_word((b, 1))
    v_in = v.n % 2 == 0
    u_in = u.n % 2 == 0
    uv1 = u * ~v
    if v_in:
        if not u_in:
            return EMPTY_COSETS
        return CosetSolutionSet(
            "full_coset",
            base=(klein_word(uv1, namespace), Word()),
            basis=(a2, bw),
            left_coords=klein_boundary_membership(uv1),
        )
    if u_in:  # parity mismatch: c v c' keeps v's parity
        return EMPTY_COSETS
    return CosetSolutionSet(
        "klein_family",
        base=(klein_word(uv1, namespace), Word()),
        basis=(a2, bw),
        left_coords=klein_boundary_membership(uv1),
        right_coords=(0, 0),
    )
