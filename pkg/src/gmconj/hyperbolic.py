"""Piece solver for hyperbolic vertices, backed by an exact matrix
representation over Z[t]/(m(t)) and bounded searches.

The representation is the user's stand-in for the discrete faithful one;
search bounds (stable-norm constant, coset-penetration constant, witness
radius) are user inputs.  Positive answers are always witness-checked and
exact; negative answers from a bounded search are flagged radius-conditional,
except trace-based negatives, which are exact.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .intlin import solve_int_linear
from .solution_sets import CosetSolutionSet, ParallelismSet
from .words import GeneratorId, Word, free_reduce, _letter_key


# --- exact ring Z[t]/(m(t)) --------------------------------------------------

@dataclass(frozen=True)
class PolyRing:
    """m(t) monic with integer coefficients, coefficients listed low to high."""

    modulus: Tuple[int, ...]

    def __post_init__(self):
        if len(self.modulus) < 2 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    def reduce(self, coeffs) -> Tuple[int, ...]:
        c = list(coeffs)
        d = self.degree
        while len(c) > d:
            lead = c.pop()
            if lead:
                off = len(c) - d
                for i in range(d):
                    c[off + i] -= lead * self.modulus[i]
        c += [0] * (d - len(c))
        return tuple(c)

    def zero(self):
        return (0,) * self.degree

    def one(self):
        return self.from_int(1)

    def from_int(self, k: int):
        return tuple([k] + [0] * (self.degree - 1))

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple(a - b for a, b in zip(x, y))

    def neg(self, x):
        return tuple(-a for a in x)

    def mul(self, x, y):
        out = [0] * (2 * self.degree - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    out[i + j] += a * b
        return self.reduce(out)


RingElt = Tuple[int, ...]
Mat = Tuple[RingElt, RingElt, RingElt, RingElt]  # row-major 2x2


def mat_identity(R: PolyRing) -> Mat:
    return (R.one(), R.zero(), R.zero(), R.one())


def mat_neg(R: PolyRing, M: Mat) -> Mat:
    return tuple(R.neg(x) for x in M)


def mat_mul(R: PolyRing, A: Mat, B: Mat) -> Mat:
    a, b, c, d = A
    e, f, g, h = B
    return (
        R.add(R.mul(a, e), R.mul(b, g)), R.add(R.mul(a, f), R.mul(b, h)),
        R.add(R.mul(c, e), R.mul(d, g)), R.add(R.mul(c, f), R.mul(d, h)),
    )


def mat_det(R: PolyRing, M: Mat) -> RingElt:
    a, b, c, d = M
    return R.sub(R.mul(a, d), R.mul(b, c))


def mat_trace(R: PolyRing, M: Mat) -> RingElt:
    return R.add(M[0], M[3])


def mat_inverse(R: PolyRing, M: Mat) -> Mat:
    """Inverse for det = +-1 (the only units supported)."""
    a, b, c, d = M
    det = mat_det(R, M)
    adj = (d, R.neg(b), R.neg(c), a)
    if det == R.one():
        return adj
    if det == R.neg(R.one()):
        return mat_neg(R, adj)
    raise ValueError("matrix determinant must be +1 or -1")


def mat_pow(R: PolyRing, M: Mat, k: int) -> Mat:
    if k < 0:
        return mat_pow(R, mat_inverse(R, M), -k)
    out = mat_identity(R)
    for _ in range(k):
        out = mat_mul(R, out, M)
    return out


# --- representation ----------------------------------------------------------

@dataclass(frozen=True)
class SearchConstants:
    K_norm: Fraction    # stable-norm lower bound
    C_bcp: int          # coset-penetration constant
    R_conj: int         # conjugator search radius

    def __post_init__(self):
        if self.K_norm <= 0 or self.C_bcp <= 0 or self.R_conj <= 0:
            raise ValueError("search constants must be positive")


class MatrixRep:
    def __init__(self, ring: PolyRing, matrices: Dict[GeneratorId, Mat],
                 projective: bool = True):
        self.ring = ring
        self.projective = projective
        self.matrices = {g: tuple(ring.reduce(e) for e in M) for g, M in matrices.items()}
        self.inverses = {g: mat_inverse(ring, M) for g, M in self.matrices.items()}

    def alphabet(self) -> List[GeneratorId]:
        return sorted(self.matrices, key=lambda g: (g.namespace, g.name))

    def matrix(self, w: Word) -> Mat:
        out = mat_identity(self.ring)
        for g, s in w:
            if g not in self.matrices:
                raise ValueError(f"generator {g} has no matrix")
            out = mat_mul(self.ring, out, self.matrices[g] if s == 1 else self.inverses[g])
        return out

    def equal(self, A: Mat, B: Mat) -> bool:
        if A == B:
            return True
        return self.projective and A == mat_neg(self.ring, B)

    def is_identity(self, M: Mat) -> bool:
        return self.equal(M, mat_identity(self.ring))

    def check_relators(self, relators) -> bool:
        return all(self.is_identity(self.matrix(r)) for r in relators)


def rep_word_problem(w: Word, rep: MatrixRep) -> bool:
    return rep.is_identity(rep.matrix(w))


# --- boundary data -----------------------------------------------------------

@dataclass(frozen=True)
class BoundaryTorus:
    """A boundary torus subgroup, given by a two-element commuting basis."""

    basis: Tuple[Word, Word]

    def probe(self) -> Word:
        return self.basis[0]


def _commutes(rep: MatrixRep, A: Mat, B: Mat) -> bool:
    return rep.equal(mat_mul(rep.ring, A, B), mat_mul(rep.ring, B, A))


def _parabolic_sign(rep: MatrixRep, B: Mat) -> Mat:
    """Pick the sign of a projective matrix that makes B - I nilpotent, if any."""
    if not rep.projective:
        return B
    R = rep.ring
    I = mat_identity(R)
    zero4 = (R.zero(),) * 4
    for cand in (B, mat_neg(R, B)):
        N = tuple(R.sub(a, b) for a, b in zip(cand, I))
        if mat_mul(R, N, N) == zero4:
            return cand
    return B


def check_boundary(rep: MatrixRep, T: BoundaryTorus) -> None:
    B1, B2 = rep.matrix(T.basis[0]), rep.matrix(T.basis[1])
    if not _commutes(rep, B1, B2):
        raise ValueError("boundary basis matrices do not commute")


def hyp_boundary_membership(w: Word, rep: MatrixRep, T: BoundaryTorus,
                            search_bound: int = 16) -> Optional[Tuple[int, int]]:
    """Coords (i, j) with w = b1^i b2^j, or None.

    Membership is the commutation test with the designated basis element;
    coords are solved linearly when the basis is parabolic (nilpotent
    displacements), else by a bounded lattice scan.
    """
    R = rep.ring
    W = rep.matrix(w)
    check_boundary(rep, T)
    B1 = _parabolic_sign(rep, rep.matrix(T.basis[0]))
    B2 = _parabolic_sign(rep, rep.matrix(T.basis[1]))
    if not _commutes(rep, W, B1):
        return None
    I = mat_identity(R)
    N1 = tuple(R.sub(a, b) for a, b in zip(B1, I))
    N2 = tuple(R.sub(a, b) for a, b in zip(B2, I))
    zero4 = (R.zero(),) * 4
    prods = [mat_mul(R, X, Y) for X in (N1, N2) for Y in (N1, N2) if X is not Y]
    if all(p == zero4 for p in prods) and mat_mul(R, N1, N1) == zero4 \
            and mat_mul(R, N2, N2) == zero4:
        # B1^i B2^j = I + i N1 + j N2: a linear integer system per coefficient
        for target in (W,) + ((mat_neg(R, W),) if rep.projective else ()):
            D = tuple(R.sub(a, b) for a, b in zip(target, I))
            rows, rhs = [], []
            for e in range(4):
                for k in range(R.degree):
                    rows.append([N1[e][k], N2[e][k]])
                    rhs.append(D[e][k])
            sol = solve_int_linear(rows, rhs)
            if sol is not None:
                i, j = sol
                if rep.equal(mat_mul(R, mat_pow(R, B1, i), mat_pow(R, B2, j)), W):
                    return (i, j)
        return None
    for i, j in _lattice_points(search_bound):
        if rep.equal(mat_mul(R, mat_pow(R, B1, i), mat_pow(R, B2, j)), W):
            return (i, j)
    return None


def _lattice_points(bound: int):
    """(i, j) ordered by l-infinity norm then lexicographically."""
    for r in range(bound + 1):
        ring = []
        for i in range(-r, r + 1):
            for j in range(-r, r + 1):
                if max(abs(i), abs(j)) == r:
                    ring.append((i, j))
        ring.sort()
        yield from ring


def boundary_word(T: BoundaryTorus, i: int, j: int) -> Word:
    return free_reduce(T.basis[0] ** i * T.basis[1] ** j)


# --- bounded-search problems -------------------------------------------------

@dataclass(frozen=True)
class OracleAnswer:
    witness: Optional[Word]
    exact: bool

    @property
    def found(self) -> bool:
        return self.witness is not None


def _witness_ball(rep: MatrixRep, radius: int):
    letters = sorted(((g, s) for g in rep.alphabet() for s in (1, -1)), key=_letter_key)
    yield Word()
    frontier = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for g, s in letters:
                if w and w[-1][0] == g and w[-1][1] == -s:
                    continue
                nw = w + ((g, s),)
                nxt.append(nw)
                yield Word(nw)
        frontier = nxt


def hyp_conjugacy(u: Word, v: Word, rep: MatrixRep, consts: SearchConstants) -> OracleAnswer:
    """Bounded search for g with g v g^-1 = u in the represented group."""
    R = rep.ring
    Mu, Mv = rep.matrix(u), rep.matrix(v)
    tu, tv = mat_trace(R, Mu), mat_trace(R, Mv)
    if not (tu == tv or (rep.projective and tu == R.neg(tv))):
        return OracleAnswer(None, True)  # trace is a conjugacy invariant
    for g in _witness_ball(rep, consts.R_conj):
        Mg = rep.matrix(g)
        if rep.equal(mat_mul(R, mat_mul(R, Mg, Mv), mat_inverse(R, Mg)), Mu):
            return OracleAnswer(g, True)
    return OracleAnswer(None, False)


def hyp_boundary_parallelism(w: Word, rep: MatrixRep, T: BoundaryTorus,
                             consts: SearchConstants) -> ParallelismSet:
    """At most one boundary element conjugate to w, per the stable-norm bound."""
    R = rep.ring
    coords = hyp_boundary_membership(w, rep, T)
    if coords is not None:
        return ParallelismSet(((coords, Word()),), exact=True)
    tw = mat_trace(R, rep.matrix(w))
    two, mtwo = R.from_int(2), R.from_int(-2)
    if not (tw == two or tw == mtwo):
        # non-parabolic trace: never conjugate into a boundary torus
        return ParallelismSet((), exact=True)
    lb1 = max(1, len(T.basis[0]))
    lb2 = max(1, len(T.basis[1]))
    budget = int(len(w) / consts.K_norm)
    for i, j in _lattice_points(budget):
        if (i, j) == (0, 0) or abs(i) * lb1 + abs(j) * lb2 > budget:
            continue
        z = boundary_word(T, i, j)
        ans = hyp_conjugacy(w, z, rep, consts)
        if ans.found:
            return ParallelismSet((((i, j), ans.witness),), exact=True)
    return ParallelismSet((), exact=False)


def hyp_two_cosets(u: Word, v: Word, rep: MatrixRep, T1: BoundaryTorus,
                   T2: BoundaryTorus, consts: SearchConstants) -> CosetSolutionSet:
    """Bounded search for the unique (c1, c2) in T1 x T2 with u = c1 v c2."""
    R = rep.ring
    m_u = hyp_boundary_membership(u, rep, T1)
    m_v = hyp_boundary_membership(v, rep, T1)
    if T1 == T2 and m_u is not None and m_v is not None:
        i, j = m_u[0] - m_v[0], m_u[1] - m_v[1]
        return CosetSolutionSet(
            "full_coset", base=(boundary_word(T1, i, j), Word()),
            basis=T1.basis, left_coords=(i, j),
        )
    Mu = rep.matrix(u)
    Mv_inv = mat_inverse(R, rep.matrix(v))
    budget = consts.C_bcp * (2 * (len(u) + len(v)) + 1)
    lb1 = max(1, len(T1.basis[0]))
    lb2 = max(1, len(T1.basis[1]))
    for i, j in _lattice_points(budget):
        if abs(i) * lb1 + abs(j) * lb2 > budget:
            continue
        c1 = boundary_word(T1, i, j)
        c2 = free_reduce(~v * ~c1 * u)
        coords2 = hyp_boundary_membership(c2, rep, T2)
        if coords2 is not None:
            return CosetSolutionSet(
                "singleton", base=(c1, c2),
                left_coords=(i, j), right_coords=coords2,
            )
    return CosetSolutionSet("empty", exact=False)
