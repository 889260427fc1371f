"""Conjugacy deciders for the two Sol-flavoured torus-glued manifolds.

Covers the fundamental groups of torus bundles over the circle with
Anosov monodromy, Z^2 semidirect Z, and of the double of the twisted
I-bundle over the Klein bottle, an amalgam of two Klein bottle groups
over their index-two torus subgroups.  All arithmetic is exact; square
roots of the monodromy discriminant live in Q(sqrt(D)).
"""

from fractions import Fraction
from math import floor
from typing import Dict, List, Optional, Tuple

from . import klein as kl
from .intlin import solve_int_linear
from .klein import KleinNF

Vec = Tuple[int, int]
Mat = Tuple[Tuple[int, int], Tuple[int, int]]

IDENT: Mat = ((1, 0), (0, 1))
_FLIP: Mat = ((1, 0), (0, -1))


def _mat_mul(A: Mat, B: Mat) -> Mat:
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


def _mat_det(A: Mat) -> int:
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


def _mat_inv(A: Mat) -> Mat:
    d = _mat_det(A)
    if d not in (1, -1):
        raise ValueError("matrix is not invertible over the integers")
    return ((d * A[1][1], -d * A[0][1]), (-d * A[1][0], d * A[0][0]))


def _mat_pow(A: Mat, n: int) -> Mat:
    base = A if n >= 0 else _mat_inv(A)
    out = IDENT
    for _ in range(abs(n)):
        out = _mat_mul(out, base)
    return out


def _col(A: Mat, v: Vec) -> Vec:
    """A acting on a column vector."""
    return (A[0][0] * v[0] + A[0][1] * v[1], A[1][0] * v[0] + A[1][1] * v[1])


def _row(v: Vec, A: Mat) -> Vec:
    """A acting on a row vector, on the right."""
    return (v[0] * A[0][0] + v[1] * A[1][0], v[0] * A[0][1] + v[1] * A[1][1])


def _add(u: Vec, v: Vec) -> Vec:
    return (u[0] + v[0], u[1] + v[1])


def _neg(v: Vec) -> Vec:
    return (-v[0], -v[1])


# --- exact quadratic field arithmetic ---------------------------------------

class QuadraticFieldElement:
    """x + y*sqrt(disc) with rational x, y; disc a positive non-square."""

    __slots__ = ("x", "y", "disc")

    def __init__(self, x, y, disc: int):
        self.x = Fraction(x)
        self.y = Fraction(y)
        self.disc = disc

    def _lift(self, other):
        if isinstance(other, QuadraticFieldElement):
            if other.disc != self.disc:
                raise ValueError("mixed discriminants")
            return other
        return QuadraticFieldElement(other, 0, self.disc)

    def __add__(self, other):
        o = self._lift(other)
        return QuadraticFieldElement(self.x + o.x, self.y + o.y, self.disc)

    def __sub__(self, other):
        o = self._lift(other)
        return QuadraticFieldElement(self.x - o.x, self.y - o.y, self.disc)

    def __neg__(self):
        return QuadraticFieldElement(-self.x, -self.y, self.disc)

    def __mul__(self, other):
        o = self._lift(other)
        return QuadraticFieldElement(
            self.x * o.x + self.y * o.y * self.disc,
            self.x * o.y + self.y * o.x, self.disc)

    def inverse(self) -> "QuadraticFieldElement":
        n = self.x * self.x - self.y * self.y * self.disc
        if n == 0:
            raise ZeroDivisionError("zero element of the quadratic field")
        return QuadraticFieldElement(self.x / n, -self.y / n, self.disc)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __eq__(self, other):
        o = self._lift(other)
        return self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.x, self.y, self.disc))

    def __repr__(self):
        return f"({self.x} + {self.y}*sqrt({self.disc}))"

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def sign(self) -> int:
        # sign of the real number x + y*sqrt(disc)
        if self.y == 0:
            return (self.x > 0) - (self.x < 0)
        if self.x == 0:
            return 1 if self.y > 0 else -1
        if self.x > 0 and self.y > 0:
            return 1
        if self.x < 0 and self.y < 0:
            return -1
        lhs = self.x * self.x
        rhs = self.y * self.y * self.disc
        if self.x > 0:
            return 1 if lhs > rhs else -1
        return -1 if lhs > rhs else 1


def _abs_cmp(a: QuadraticFieldElement, b: QuadraticFieldElement) -> int:
    """Compare |a| with |b| exactly: -1, 0 or 1."""
    return (a * a - b * b).sign()


def _power_match(lam: QuadraticFieldElement, r: QuadraticFieldElement) -> Optional[int]:
    """The integer n with lam^n == r, if any; requires |lam| != 1."""
    one = QuadraticFieldElement(1, 0, lam.disc)
    for step, sgn in ((lam, 1), (lam.inverse(), -1)):
        growing = _abs_cmp(step, one) > 0
        p = one
        n = 0
        while True:
            c = _abs_cmp(p, r)
            if c == 0:
                if p == r:
                    return sgn * n
                break
            # |lam^n| is strictly monotone in n, so stop once |r| is passed
            if c > 0 if growing else c < 0:
                break
            p = p * step
            n += 1
    return None


def eigen_power_solve(u: Vec, v: Vec, phi: Mat) -> Optional[int]:
    """The unique n with u = phi^n(v) (column action), or None.

    phi must be Anosov: determinant 1 and |trace| > 2.  Works in exact
    eigencoordinates over Q(sqrt(trace^2 - 4)).
    """
    tr = phi[0][0] + phi[1][1]
    if _mat_det(phi) != 1 or abs(tr) <= 2:
        raise ValueError("monodromy must be Anosov (det 1, |trace| > 2)")
    if v == (0, 0):
        return 0 if u == (0, 0) else None
    if u == (0, 0):
        return None
    disc = tr * tr - 4
    half = Fraction(1, 2)
    lam = QuadraticFieldElement(Fraction(tr, 2), half, disc)

    def qfe(k):
        return QuadraticFieldElement(k, 0, disc)

    def conj(z):
        return QuadraticFieldElement(z.x, -z.y, disc)

    (a, b), (c, d) = phi
    if c != 0:
        e1 = (lam - qfe(d), qfe(c))
    else:
        e1 = (qfe(b), lam - qfe(a))
    e2 = (conj(e1[0]), conj(e1[1]))
    det = e1[0] * e2[1] - e1[1] * e2[0]

    def coords(w):
        w0, w1 = qfe(w[0]), qfe(w[1])
        return ((w0 * e2[1] - w1 * e2[0]) / det, (e1[0] * w1 - e1[1] * w0) / det)

    u1, _ = coords(u)
    v1, _ = coords(v)
    # integer vectors never lie on an irrational eigenline
    if v1.is_zero() or u1.is_zero():
        return None
    n = _power_match(lam, u1 / v1)
    if n is None:
        return None
    return n if _col(_mat_pow(phi, n), v) == u else None


# --- torus bundles over the circle ------------------------------------------

TBElement = Tuple[Vec, int]


class TorusBundleGroup:
    """Z^2 semidirect Z with Anosov monodromy; elements are (u, p) = u.t^p."""

    def __init__(self, phi: Mat):
        phi = (tuple(phi[0]), tuple(phi[1]))
        if _mat_det(phi) != 1:
            raise ValueError("monodromy must have determinant 1")
        if abs(phi[0][0] + phi[1][1]) <= 2:
            raise ValueError("monodromy must be Anosov (|trace| > 2)")
        self.phi = phi
        self._powers: Dict[int, Mat] = {0: IDENT}
        # abelianization of the Z^2 part is Z^2 / (I - phi) Z^2
        self._ab = ((1 - phi[0][0], -phi[0][1]), (-phi[1][0], 1 - phi[1][1]))

    def power(self, p: int) -> Mat:
        if p not in self._powers:
            self._powers[p] = _mat_pow(self.phi, p)
        return self._powers[p]

    def mul(self, g1: TBElement, g2: TBElement) -> TBElement:
        (u, p), (v, q) = g1, g2
        return (_add(u, _col(self.power(p), v)), p + q)

    def inv(self, g: TBElement) -> TBElement:
        u, p = g
        return (_neg(_col(self.power(-p), u)), -p)

    def identity(self) -> TBElement:
        return ((0, 0), 0)

    def abelianized(self, g: TBElement) -> Tuple[Vec, int]:
        """Image of g in the abelianization (coset of u mod (I - phi)Z^2, p)."""
        u, p = g
        # reduce u modulo the column lattice of I - phi
        A = self._ab
        best = u
        d = _mat_det(A)
        if d != 0:
            # unique rational solve, then shift by the integral part
            x = Fraction(u[0] * A[1][1] - u[1] * A[0][1], d)
            y = Fraction(A[0][0] * u[1] - A[1][0] * u[0], d)
            shift = _col(A, (floor(x), floor(y)))
            best = (u[0] - shift[0], u[1] - shift[1])
        return (best, p)


def torus_bundle_conjugacy(g1: TBElement, g2: TBElement,
                           G: TorusBundleGroup) -> Optional[TBElement]:
    """A witness w with w g1 w^-1 = g2, or None (an exact negative)."""
    (u, p), (v, q) = g1, g2
    if p != q:
        # the projection killing Z^2 and keeping t separates them
        return None
    if p == 0:
        n = eigen_power_solve(v, u, G.phi)
        if n is None:
            return None
        witness: TBElement = ((0, 0), n)
    else:
        witness = None
        for k in range(abs(p) + 1):
            # conjugating g1 by t^k replaces u with phi^k(u)
            uk = _col(G.power(k), u)
            A = G.power(p)
            lhs = ((1 - A[0][0], -A[0][1]), (-A[1][0], 1 - A[1][1]))
            if _mat_det(lhs) == 0:
                raise AssertionError("I - phi^p is singular for Anosov phi")
            c = solve_int_linear([list(lhs[0]), list(lhs[1])],
                                 [v[0] - uk[0], v[1] - uk[1]])
            if c is None:
                continue
            witness = ((c[0], c[1]), k)
            break
        if witness is None:
            return None
    if G.mul(witness, G.mul(g1, G.inv(witness))) != g2:
        raise AssertionError("torus bundle witness failed verification")
    if G.abelianized(g1) != G.abelianized(g2):
        raise AssertionError("conjugate elements with distinct abelianizations")
    return witness


# --- the double of the twisted I-bundle over the Klein bottle ----------------

AmalgamNF = Tuple[Tuple[int, ...], Vec]


def _orbit_solve(M: Mat, src: Vec, dst: Vec) -> Optional[int]:
    """The least-|n| integer n with src * M^n == dst (row action), or None."""
    if _mat_det(M) != 1:
        raise ValueError("orbit matrix must have determinant 1")
    if src == dst:
        return 0
    tr = M[0][0] + M[1][1]
    if abs(tr) > 2:
        return eigen_power_solve(dst, src, ((M[0][0], M[1][0]), (M[0][1], M[1][1])))
    if abs(tr) < 2:
        # finite order dividing 6
        cur = src
        for n in range(1, 6):
            cur = _row(cur, M)
            if cur == dst:
                return n
        return None
    sign = 1 if tr == 2 else -1
    # +-(I + N) with N nilpotent: M^n = (+-1)^n (I + n N)
    P = M if sign == 1 else ((-M[0][0], -M[0][1]), (-M[1][0], -M[1][1]))
    N = ((P[0][0] - 1, P[0][1]), (P[1][0], P[1][1] - 1))
    sN = _row(src, N)
    best = None
    for parity in (0, 1):
        target = dst if (sign == 1 or parity == 0) else _neg(dst)
        diff = (target[0] - src[0], target[1] - src[1])
        if sN == (0, 0):
            cands = [parity] if diff == (0, 0) else []
        else:
            i = 0 if sN[0] != 0 else 1
            if diff[i] % sN[i]:
                continue
            n = diff[i] // sN[i]
            cands = [n] if (n * sN[0], n * sN[1]) == diff and n % 2 == parity else []
        for n in cands:
            if best is None or abs(n) < abs(best):
                best = n
    return best


class DoubleKleinGroup:
    """Amalgam of two Klein bottle groups <a_i, b_i | a_i b_i a_i^-1 = b_i^-1>
    over H_i = <a_i^2, b_i>, glued by varphi: H_1 -> H_2.

    Coordinates (n, m) are exponents in the ordered basis (a_i^2, b_i); the
    rows of varphi are the images of a_1^2 and b_1, and matrices act on
    coordinate row vectors.  Elements are normal forms (letters, h): an
    alternating word in the coset representatives a_1, a_2 followed by an
    element of H in H_1 coordinates.
    """

    def __init__(self, varphi: Mat):
        varphi = (tuple(varphi[0]), tuple(varphi[1]))
        if _mat_det(varphi) not in (1, -1):
            raise ValueError("gluing matrix must be invertible over the integers")
        self.varphi = varphi
        self.varphi_inv = _mat_inv(varphi)
        # action of conjugation by a_i on H_1 coordinates
        self.flip1 = _FLIP
        self.flip2 = _mat_mul(_mat_mul(varphi, _FLIP), self.varphi_inv)
        # a_i^2 in H_1 coordinates
        self.sq = {1: (1, 0), 2: _row((1, 0), self.varphi_inv)}
        # conjugation by (a1 a2)^-1 acts on H as the twist matrix M
        self.M = _mat_mul(_mat_mul(_mat_mul(_FLIP, varphi), _FLIP), self.varphi_inv)

    # -- normal form arithmetic ----------------------------------------------

    def identity(self) -> AmalgamNF:
        return ((), (0, 0))

    def from_h(self, h: Vec) -> AmalgamNF:
        return ((), (h[0], h[1]))

    def _mul_letter(self, X: AmalgamNF, i: int) -> AmalgamNF:
        letters, h = X
        flip = self.flip1 if i == 1 else self.flip2
        h2 = _row(h, flip)
        if letters and letters[-1] == i:
            return (letters[:-1], _add(self.sq[i], h2))
        return (letters + (i,), h2)

    def _mul_letter_inv(self, X: AmalgamNF, i: int) -> AmalgamNF:
        letters, h = self._mul_letter(X, i)
        return (letters, _add(h, _neg(self.sq[i])))

    def mul(self, X: AmalgamNF, Y: AmalgamNF) -> AmalgamNF:
        Z = X
        for i in Y[0]:
            Z = self._mul_letter(Z, i)
        return (Z[0], _add(Z[1], Y[1]))

    def inv(self, X: AmalgamNF) -> AmalgamNF:
        Z: AmalgamNF = ((), _neg(X[1]))
        for i in reversed(X[0]):
            Z = self._mul_letter_inv(Z, i)
        return Z

    def conj(self, g: AmalgamNF, X: AmalgamNF) -> AmalgamNF:
        return self.mul(self.mul(g, X), self.inv(g))

    def factor_element(self, i: int, n: int, m: int) -> AmalgamNF:
        """a_i^n b_i^m as an amalgam normal form."""
        if i not in (1, 2):
            raise ValueError("factor index must be 1 or 2")
        r = n % 2
        s = (n - r) // 2
        h = (s, m) if i == 1 else _row((s, m), self.varphi_inv)
        if r:
            # a_i commutes with a_i^2, so pull it to the front
            return self.mul(((i,), (0, 0)), self.from_h(h))
        return self.from_h(h)

    def loop_element(self, p: int, h: Vec) -> AmalgamNF:
        """(a_1 a_2)^p . h with h in H_1 coordinates."""
        Z = self.identity()
        for _ in range(abs(p)):
            if p > 0:
                Z = self._mul_letter(self._mul_letter(Z, 1), 2)
            else:
                Z = self._mul_letter_inv(self._mul_letter_inv(Z, 2), 1)
        return self.mul(Z, self.from_h(h))

    def factor_coords(self, X: AmalgamNF) -> Optional[Tuple[int, KleinNF]]:
        """(i, a_i^n b_i^m) when X lies in a factor, else None."""
        letters, h = X
        if len(letters) > 1:
            return None
        if letters == (2,):
            s, m = _row(h, self.varphi)
            return (2, KleinNF(2 * s + 1, m))
        if letters == (1,):
            return (1, KleinNF(2 * h[0] + 1, h[1]))
        return (1, KleinNF(2 * h[0], h[1]))


def _cyclic_canonical(G: DoubleKleinGroup, X: AmalgamNF) -> Tuple[AmalgamNF, AmalgamNF]:
    """(Xc, g) with g X g^-1 = Xc and Xc cyclically reduced: letters are
    empty, a single letter, or the pattern (1, 2)^p."""
    g = G.identity()
    cur = X
    while len(cur[0]) >= 2:
        f = cur[0][0]
        if cur[0][-1] == f or f == 2:
            step = G.inv(G.factor_element(f, 1, 0))
        else:
            break
        cur = G.conj(step, cur)
        g = G.mul(step, g)
    return cur, g


def double_klein_conjugacy(U: AmalgamNF, V: AmalgamNF,
                           G: DoubleKleinGroup) -> Optional[AmalgamNF]:
    """A witness w with w U w^-1 = V, or None (an exact negative)."""
    Ub, cu = _cyclic_canonical(G, U)
    Vb, cv = _cyclic_canonical(G, V)
    lu, lv = len(Ub[0]), len(Vb[0])
    wbar: Optional[AmalgamNF] = None
    if lu != lv:
        return None
    if lu == 1:
        if Ub[0] != Vb[0]:
            # odd powers of a_i stay in their own factor under conjugation
            return None
        fu = G.factor_coords(Ub)
        fv = G.factor_coords(Vb)
        gk = kl.klein_conjugacy(fv[1], fu[1])
        if gk is None:
            return None
        wbar = G.factor_element(fu[0], gk.n, gk.m)
    elif lu == 0:
        u, v = Ub[1], Vb[1]
        # orbit of u under all conjugations: twists M^n, optionally flipped
        for flipped in (False, True):
            src = _row(u, G.flip1) if flipped else u
            n = _orbit_solve(G.M, src, v)
            if n is None:
                continue
            w = G.loop_element(-n, (0, 0))
            if flipped:
                w = G.mul(w, G.factor_element(1, 1, 0))
            wbar = w
            break
        if wbar is None:
            return None
    else:
        p = lu // 2
        if Ub[0] != Vb[0]:
            raise AssertionError("canonical loop letter patterns must agree")
        Mp = _mat_pow(G.M, p)
        lhs = ((Mp[0][0] - 1, Mp[0][1]), (Mp[1][0], Mp[1][1] - 1))
        # all letter rotations of Ub that keep the canonical pattern
        cur, r = Ub, G.identity()
        for _ in range(p):
            hk = cur[1]
            # want c in H with c (a1 a2)^p hk c^-1 = (a1 a2)^p v:
            # pulling c through the loop twists it by M^p, so
            # c M^p + hk - c = v  (row vectors)
            rhs = (Vb[1][0] - hk[0], Vb[1][1] - hk[1])
            c = solve_int_linear([[lhs[0][0], lhs[1][0]], [lhs[0][1], lhs[1][1]]],
                                 [rhs[0], rhs[1]])
            if c is not None:
                wbar = G.mul(G.from_h((c[0], c[1])), r)
                break
            # rotate by one full a1 a2 pair
            for f in (1, 2):
                step = G.inv(G.factor_element(cur[0][0], 1, 0))
                cur = G.conj(step, cur)
                r = G.mul(step, r)
        if wbar is None:
            return None
        if G.conj(wbar, Ub) != Vb:
            raise AssertionError("double Klein loop witness failed verification")
    w = G.mul(G.inv(cv), G.mul(wbar, cu))
    if G.conj(w, U) != V:
        raise AssertionError("double Klein witness failed verification")
    return w
