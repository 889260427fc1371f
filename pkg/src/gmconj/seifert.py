"""Solver for a Seifert fibered piece with non-empty boundary.

The piece group has a central-up-to-sign fiber subgroup <h>; the quotient
by <h> is a free product of cyclic groups once the last boundary
generator d_p is eliminated through the long relation.  An element is
kept as (quotient normal form, fiber exponent): it equals the quotient
normal form read verbatim as a word, times h^fiber.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import free_product as fp
from .free_product import FreeProductNF, FreeProductOfCyclics
from .solution_sets import EMPTY_COSETS, CosetSolutionSet, ParallelismSet
from .words import GeneratorId, Presentation, Word, free_reduce, make_presentation, word as make_word


@dataclass(frozen=True)
class SeifertPiece:
    orientable_base: bool
    genus: int
    boundaries: int            # p >= 1
    b: int
    exceptional: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.boundaries < 1:
            raise ValueError("need at least one boundary component")
        if self.genus < 0:
            raise ValueError("genus must be >= 0")
        if not self.orientable_base and self.genus < 1:
            raise ValueError("non-orientable base needs genus >= 1")
        for alpha, beta in self.exceptional:
            if alpha < 2 or not (0 < beta < alpha):
                raise ValueError(f"bad exceptional fiber ({alpha},{beta})")
            if math.gcd(alpha, beta) != 1:
                warnings.warn(f"exceptional fiber ({alpha},{beta}) not coprime")


def excluded_piece_reason(P: SeifertPiece) -> Optional[str]:
    """Pieces that never occur in a minimal splitting (rejected at graph level)."""
    g, p, q = P.genus, P.boundaries, len(P.exceptional)
    if P.orientable_base and g == 0 and p == 1 and q <= 1:
        return "solid torus"
    if P.orientable_base and g == 0 and p == 2 and q == 0:
        return "thickened torus"
    if P.orientable_base and g == 0 and p == 1 and q == 2 \
            and all(a == 2 for a, _ in P.exceptional):
        return "twisted I-bundle over the Klein bottle"
    if not P.orientable_base and g == 1 and p == 1 and q == 0:
        return "twisted I-bundle over the Klein bottle"
    return None


@dataclass(frozen=True)
class BoundaryCoords:
    k: int
    alpha: int  # d_k exponent
    beta: int   # h exponent


class SeifertNF:
    __slots__ = ("quotient", "fiber")

    def __init__(self, quotient: FreeProductNF, fiber: int):
        self.quotient = quotient
        self.fiber = fiber

    def __eq__(self, other):
        return (isinstance(other, SeifertNF)
                and self.quotient == other.quotient and self.fiber == other.fiber)

    def __hash__(self):
        return hash((self.quotient, self.fiber))

    def is_identity(self) -> bool:
        return not self.quotient and self.fiber == 0

    def __repr__(self):
        return f"SeifertNF({self.quotient!r}, h^{self.fiber})"


class SeifertContext:
    """Derived data for one piece: generators, quotient group, substitutions."""

    def __init__(self, P: SeifertPiece, namespace: str = ""):
        self.piece = P
        self.namespace = namespace
        ns = namespace
        g, p, q = P.genus, P.boundaries, len(P.exceptional)
        self.h = GeneratorId(ns, "h")
        self.a = [GeneratorId(ns, f"a{i+1}") for i in range(g)]
        self.b_gens = [GeneratorId(ns, f"b{i+1}") for i in range(g)] if P.orientable_base else []
        self.c = [GeneratorId(ns, f"c{j+1}") for j in range(q)]
        self.d = [GeneratorId(ns, f"d{k+1}") for k in range(p)]
        # quotient factors: everything except h and the eliminated d_p
        factors: List[Tuple[GeneratorId, Optional[int]]] = []
        for i in range(g):
            factors.append((self.a[i], None))
            if P.orientable_base:
                factors.append((self.b_gens[i], None))
        for j in range(q):
            factors.append((self.c[j], P.exceptional[j][0]))
        for k in range(p - 1):
            factors.append((self.d[k], None))
        self.quotient_group = FreeProductOfCyclics(tuple(factors))
        self._nf_cache: Dict[Word, SeifertNF] = {}
        self._a_indices = {self.quotient_group.index_of(x) for x in self.a}
        self._c_beta: Dict[int, int] = {
            self.quotient_group.index_of(self.c[j]): P.exceptional[j][1] for j in range(q)
        }
        # long relation prefix W with  h^b = W * d_p
        letters = []
        for i in range(g):
            if P.orientable_base:
                letters += [(self.a[i], 1), (self.b_gens[i], 1), (self.a[i], -1), (self.b_gens[i], -1)]
            else:
                letters += [(self.a[i], 1), (self.a[i], 1)]
        for cj in self.c:
            letters.append((cj, 1))
        for dk in self.d[:-1]:
            letters.append((dk, 1))
        self.W = Word(letters)

    def generators(self) -> List[GeneratorId]:
        return self.a + self.b_gens + self.c + self.d + [self.h]

    # -- presentation --------------------------------------------------------

    def presentation(self) -> Presentation:
        P = self.piece
        rels: List[Word] = []
        h = make_word((self.h, 1))
        for x in self.a:
            xw = make_word((x, 1))
            if P.orientable_base:
                rels.append(free_reduce(xw * h * ~xw * ~h))
            else:
                rels.append(free_reduce(xw * h * ~xw * h))
        for x in self.b_gens + self.c + self.d:
            xw = make_word((x, 1))
            rels.append(free_reduce(xw * h * ~xw * ~h))
        for j, (alpha, beta) in enumerate(P.exceptional):
            rels.append(free_reduce(make_word((self.c[j], 1)) ** alpha * h ** (-beta)))
        rels.append(free_reduce(self.W * make_word((self.d[-1], 1)) * h ** (-P.b)))
        return make_presentation(self.generators(), rels)

    # -- normal form ---------------------------------------------------------

    def _expand_dp(self, w: Word) -> Word:
        dp = self.d[-1]
        out: List[Tuple[GeneratorId, int]] = []
        hb = make_word((self.h, 1)) ** self.piece.b
        for g, s in w:
            if g == dp:
                # h^b = W d_p  =>  d_p = W^-1 h^b
                out.extend(((~self.W) * hb if s == 1 else (~hb) * self.W).letters)
            else:
                out.append((g, s))
        return Word(out)

    def _letter_eps(self, idx: int) -> int:
        if not self.piece.orientable_base and idx in self._a_indices:
            return -1
        return 1

    def normalize(self, w: Word) -> SeifertNF:
        cached = self._nf_cache.get(w)
        if cached is not None:
            return cached
        nf = self._normalize(w)
        if len(self._nf_cache) < 200000:
            self._nf_cache[w] = nf
        return nf

    def _normalize(self, w: Word) -> SeifertNF:
        Q = self.quotient_group
        syl: List[Tuple[int, int]] = []
        k = 0
        for g, s in self._expand_dp(w):
            if g == self.h:
                k += s
                continue
            i = Q.index_of(g)
            k *= self._letter_eps(i)
            # append gen_i^s with exponent carry into the fiber
            if syl and syl[-1][0] == i:
                e = syl[-1][1] + s
                syl.pop()
            else:
                e = s
            order = Q.order(i)
            if order is None:
                if e:
                    syl.append((i, e))
            else:
                e2 = e % order
                k += ((e - e2) // order) * self._c_beta[i]
                if e2:
                    syl.append((i, e2))
        return SeifertNF(FreeProductNF(syl), k)

    def mul(self, x: SeifertNF, y: SeifertNF) -> SeifertNF:
        return self.normalize(self.to_word(x) * self.to_word(y))

    def lift(self, q: FreeProductNF) -> Word:
        """The section: read the quotient normal form verbatim."""
        return fp.nf_to_word(self.quotient_group, q)

    def to_word(self, x: SeifertNF) -> Word:
        return free_reduce(self.lift(x.quotient) * make_word((self.h, 1)) ** x.fiber)

    def eps(self, x) -> int:
        """Conjugation action on the fiber: w h w^-1 = h^eps(w)."""
        if self.piece.orientable_base:
            return 1
        q = x.quotient if isinstance(x, SeifertNF) else self.normalize(x).quotient
        parity = sum(e for i, e in q.syllables if i in self._a_indices)
        return -1 if parity % 2 else 1

    def word_problem(self, w: Word) -> bool:
        return self.normalize(w).is_identity()

    # -- boundary subgroups --------------------------------------------------

    def d_word(self, k: int) -> Word:
        return make_word((self.d[k - 1], 1))

    def h_word(self) -> Word:
        return make_word((self.h, 1))

    def dbar(self, k: int) -> FreeProductNF:
        """Quotient image of d_k."""
        if not 1 <= k <= self.piece.boundaries:
            raise ValueError(f"bad boundary index {k}")
        return self.normalize(self.d_word(k)).quotient

    def boundary_membership(self, w: Word, k: int) -> Optional[BoundaryCoords]:
        db = self.dbar(k)
        if not db:
            raise ValueError("degenerate piece: trivial boundary image")
        x = self.normalize(w)
        alpha = fp._power_exponent(self.quotient_group, x.quotient, db)
        if alpha is None:
            return None
        beta = x.fiber - self.normalize(self.d_word(k) ** alpha).fiber
        return BoundaryCoords(k, alpha, beta)

    def boundary_word(self, k: int, alpha: int, beta: int) -> Word:
        return free_reduce(self.d_word(k) ** alpha * self.h_word() ** beta)

    # -- the three problems --------------------------------------------------

    def boundary_parallelism(self, w: Word, k: int) -> ParallelismSet:
        x = self.normalize(w)
        if not x.quotient:
            beta = x.fiber
            elems = [((0, beta), Word())]
            if not self.piece.orientable_base and beta != 0:
                elems.append(((0, -beta), make_word((self.a[0], 1))))
            return ParallelismSet(tuple(elems))
        res = fp.conjugate_to_power(self.quotient_group, x.quotient, self.dbar(k))
        if res is None:
            return ParallelismSet(())
        alpha, abar = res
        a = self.lift(abar)
        t = self.normalize(~a * w * a)
        beta = t.fiber - self.normalize(self.d_word(k) ** alpha).fiber
        return ParallelismSet((((alpha, beta), free_reduce(a)),))

    def two_cosets(self, u: Word, v: Word, k1: int, k2: int) -> CosetSolutionSet:
        mv = self.boundary_membership(v, k2)
        mu = self.boundary_membership(u, k1)
        h = self.h_word()
        if k1 == k2 and mv is not None:
            if mu is None:
                return EMPTY_COSETS
            base0 = free_reduce(self.boundary_word(k1, mu.alpha - mv.alpha,
                                                   mu.beta - mv.beta))
            return CosetSolutionSet(
                "full_coset", base=(base0, Word()),
                basis=(self.d_word(k1), h),
                left_coords=(mu.alpha - mv.alpha, mu.beta - mv.beta),
            )
        x, y = self.normalize(u), self.normalize(v)
        dc = fp.double_coset(self.quotient_group, x.quotient, y.quotient,
                             self.dbar(k1), self.dbar(k2))
        if dc is None:
            return EMPTY_COSETS
        alpha, gamma = dc
        z = self.normalize(self.d_word(k1) ** alpha * v * self.d_word(k2) ** gamma)
        if z.quotient != x.quotient:
            return EMPTY_COSETS
        theta = x.fiber - z.fiber
        return CosetSolutionSet(
            "line",
            base=(self.boundary_word(k1, alpha, 0), self.boundary_word(k2, gamma, theta)),
            step=(h, h), eps=self.eps(y),
            left_coords=(alpha, 0), right_coords=(gamma, theta),
        )

    # -- conjugacy -----------------------------------------------------------

    def _fiber_shift_witness(self, v: Word, m: int) -> Optional[Word]:
        """g with g v g^-1 = v h^m, conjugators taken over the centralizer."""
        y = self.normalize(v)
        Q = self.quotient_group
        xbar = fp.centralizer_generator(Q, y.quotient)
        xw = self.lift(xbar)
        n1 = self.normalize(xw * v * ~xw).fiber - y.fiber
        eps_x = self.eps(self.normalize(xw))
        e = self.eps(y) - 1  # 0 or -2: shift from conjugating by h
        h = self.h_word()
        if eps_x == 1:
            g = math.gcd(n1, e)
            if g == 0:
                return Word() if m == 0 else None
            if m % g:
                return None
            # m = s*n1 + t*e via the extended euclidean algorithm
            if e == 0:
                s, t = m // n1, 0
            elif n1 == 0:
                s, t = 0, m // e
            else:
                s0, t0 = _ext_gcd(n1, e)
                s, t = s0 * (m // g), t0 * (m // g)
            return free_reduce(xw ** s * h ** t)
        # eps_x == -1: achievable shifts are e*Z union (n1 + e*Z)
        if e == 0:
            if m == 0:
                return Word()
            if m == n1:
                return free_reduce(xw)
            return None
        if m % e == 0:
            return free_reduce(h ** (m // e))
        if (n1 - m) % e == 0:
            return free_reduce(xw * h ** ((n1 - m) // e))
        return None

    def conjugacy(self, u: Word, v: Word) -> Optional[Word]:
        """Witness g with g v g^-1 = u in the piece group, or None."""
        x, y = self.normalize(u), self.normalize(v)
        if not y.quotient:
            if x.quotient:
                return None
            if x.fiber == y.fiber:
                return Word()
            if not self.piece.orientable_base and x.fiber == -y.fiber:
                return make_word((self.a[0], 1))
            return None
        if not x.quotient:
            return None
        Q = self.quotient_group
        abar = fp.conjugacy(Q, x.quotient, y.quotient)
        if abar is None:
            return None
        aw = self.lift(abar)
        p = x.fiber - self.normalize(aw * v * ~aw).fiber
        eps_a = self.eps(self.normalize(aw))
        g0 = self._fiber_shift_witness(v, p * eps_a)
        if g0 is None:
            return None
        g = free_reduce(aw * g0)
        assert self.normalize(g * v * ~g) == x
        return g


def _ext_gcd(a: int, b: int) -> Tuple[int, int]:
    """(s, t) with s*a + t*b = gcd(a, b) > 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t
