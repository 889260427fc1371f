"""Exact algebra in free products of cyclic groups.

Elements are kept in syllable normal form: a sequence of (factor index,
exponent) with adjacent syllables in distinct factors; exponents of an
order-n factor live in {1, .., n-1}, infinite-order exponents in Z\\{0}.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .words import GeneratorId, Word, word as make_word

Syllable = Tuple[int, int]


@dataclass(frozen=True)
class FreeProductOfCyclics:
    factors: Tuple[Tuple[GeneratorId, Optional[int]], ...]  # (generator, order or None)

    def __post_init__(self):
        gens = [g for g, _ in self.factors]
        if len(set(gens)) != len(gens):
            raise ValueError("factor generators must be distinct")
        for _, n in self.factors:
            if n is not None and n < 2:
                raise ValueError("finite factor orders must be >= 2")

    def index_of(self, g: GeneratorId) -> int:
        for i, (h, _) in enumerate(self.factors):
            if h == g:
                return i
        raise ValueError(f"unknown generator {g}")

    def order(self, i: int) -> Optional[int]:
        return self.factors[i][1]

    def generator(self, i: int) -> GeneratorId:
        return self.factors[i][0]


class FreeProductNF:
    __slots__ = ("syllables",)

    def __init__(self, syllables=()):
        object.__setattr__(self, "syllables", tuple(syllables))

    def __eq__(self, other):
        return isinstance(other, FreeProductNF) and self.syllables == other.syllables

    def __hash__(self):
        return hash(self.syllables)

    def __len__(self):
        return len(self.syllables)

    def __bool__(self):
        return bool(self.syllables)

    def __repr__(self):
        return f"FreeProductNF({list(self.syllables)})"


IDENTITY = FreeProductNF()


def _canon_exp(e: int, order: Optional[int]) -> int:
    return e if order is None else e % order


def _append(syllables: List[Syllable], i: int, e: int, G: FreeProductOfCyclics) -> None:
    """Multiply the NF prefix in `syllables` on the right by gen_i^e."""
    e = _canon_exp(e, G.order(i))
    if e == 0:
        return
    if syllables and syllables[-1][0] == i:
        total = _canon_exp(syllables[-1][1] + e, G.order(i))
        syllables.pop()
        if total != 0:
            syllables.append((i, total))
    else:
        syllables.append((i, e))


def nf(G: FreeProductOfCyclics, syllables) -> FreeProductNF:
    out: List[Syllable] = []
    for i, e in syllables:
        if not (0 <= i < len(G.factors)):
            raise ValueError(f"bad factor index {i}")
        _append(out, i, e, G)
    return FreeProductNF(out)


def normalize(w: Word, G: FreeProductOfCyclics) -> FreeProductNF:
    out: List[Syllable] = []
    for g, s in w:
        _append(out, G.index_of(g), s, G)
    return FreeProductNF(out)


def nf_mul(G: FreeProductOfCyclics, *xs: FreeProductNF) -> FreeProductNF:
    out: List[Syllable] = []
    for x in xs:
        for i, e in x.syllables:
            _append(out, i, e, G)
    return FreeProductNF(out)


def nf_inv(G: FreeProductOfCyclics, x: FreeProductNF) -> FreeProductNF:
    out: List[Syllable] = []
    for i, e in reversed(x.syllables):
        _append(out, i, -e, G)
    return FreeProductNF(out)


def nf_pow(G: FreeProductOfCyclics, x: FreeProductNF, n: int) -> FreeProductNF:
    if n < 0:
        return nf_pow(G, nf_inv(G, x), -n)
    out = IDENTITY
    for _ in range(n):
        out = nf_mul(G, out, x)
    return out


def nf_to_word(G: FreeProductOfCyclics, x: FreeProductNF) -> Word:
    letters = []
    for i, e in x.syllables:
        sign = 1 if e > 0 else -1
        letters.extend([(G.generator(i), sign)] * abs(e))
    return Word(letters)


def cyclic_reduce_nf(G: FreeProductOfCyclics, x: FreeProductNF) -> Tuple[FreeProductNF, FreeProductNF]:
    """Return (c, shell) with shell * c * shell^-1 == x and c cyclically reduced
    (length <= 1, or first and last syllables in distinct factors)."""
    c = x
    shell = IDENTITY
    while len(c) >= 2 and c.syllables[0][0] == c.syllables[-1][0]:
        s = FreeProductNF([c.syllables[0]])
        c = nf_mul(G, nf_inv(G, s), c, s)
        shell = nf_mul(G, shell, s)
    return c, shell


def syl_len(x: FreeProductNF) -> int:
    return len(x.syllables)


def conjugacy(G: FreeProductOfCyclics, u: FreeProductNF, v: FreeProductNF) -> Optional[FreeProductNF]:
    """Witness g with g v g^-1 == u, or None."""
    cu, gu = cyclic_reduce_nf(G, u)
    cv, gv = cyclic_reduce_nf(G, v)
    if len(cu) != len(cv):
        return None
    if len(cu) <= 1:
        # cyclic factors are abelian: conjugate iff equal syllables
        if cu != cv:
            return None
        return nf_mul(G, gu, nf_inv(G, gv))
    n = len(cv)
    for r in range(n):
        if cv.syllables[r:] + cv.syllables[:r] == cu.syllables:
            p = FreeProductNF(cv.syllables[:r])
            return nf_mul(G, gu, nf_inv(G, p), nf_inv(G, gv))
    return None


def has_infinite_order(G: FreeProductOfCyclics, d: FreeProductNF) -> bool:
    c, _ = cyclic_reduce_nf(G, d)
    if len(c) == 0:
        return False
    if len(c) == 1:
        return G.order(c.syllables[0][0]) is None
    return True


def _power_exponent(G: FreeProductOfCyclics, t: FreeProductNF, d: FreeProductNF) -> Optional[int]:
    """gamma with t == d^gamma, or None (d nontrivial)."""
    if not t:
        return 0
    cap = syl_len(t) + 2
    for sign in (1, -1):
        w = IDENTITY
        step = d if sign == 1 else nf_inv(G, d)
        for k in range(1, cap + 1):
            w = nf_mul(G, w, step)
            if w == t:
                return sign * k
            if syl_len(w) > syl_len(t):
                break
    return None


def conjugate_to_power(G: FreeProductOfCyclics, u: FreeProductNF,
                       d: FreeProductNF) -> Optional[Tuple[int, FreeProductNF]]:
    """(alpha, witness) with witness * d^alpha * witness^-1 == u, or None.

    d must have infinite order, making alpha unique when it exists.
    """
    if not has_infinite_order(G, d):
        raise ValueError("d must have infinite order")
    cu, _ = cyclic_reduce_nf(G, u)
    cd, _ = cyclic_reduce_nf(G, d)
    if len(cd) == 1:
        bound = abs(cu.syllables[0][1]) // abs(cd.syllables[0][1]) if len(cu) == 1 else 0
    else:
        bound = len(cu) // len(cd)
    for a in range(0, bound + 1):
        for alpha in ((a,) if a == 0 else (a, -a)):
            w = conjugacy(G, u, nf_pow(G, d, alpha))
            if w is not None:
                return alpha, w
    return None


def double_coset(G: FreeProductOfCyclics, u: FreeProductNF, v: FreeProductNF,
                 d1: FreeProductNF, d2: FreeProductNF) -> Optional[Tuple[int, int]]:
    """The unique (alpha, gamma) with u == d1^alpha * v * d2^gamma, or None."""
    for d in (d1, d2):
        if not has_infinite_order(G, d):
            raise ValueError("d1 and d2 must have infinite order")
    if d1 == d2 and _power_exponent(G, v, d1) is not None:
        raise ValueError("v must not be a power of d1")
    cd1, _ = cyclic_reduce_nf(G, d1)
    step = max(1, len(cd1))
    bound = -(-(syl_len(u) + syl_len(v)) // step) + 2
    v_inv = nf_inv(G, v)
    for a in range(0, bound + 1):
        for alpha in ((a,) if a == 0 else (a, -a)):
            t = nf_mul(G, v_inv, nf_pow(G, d1, -alpha), u)
            gamma = _power_exponent(G, t, d2)
            if gamma is not None:
                return alpha, gamma
    return None


def centralizer_generator(G: FreeProductOfCyclics, v: FreeProductNF) -> FreeProductNF:
    """A generator of the (cyclic) centralizer of a nontrivial v."""
    if not v:
        raise ValueError("identity has non-cyclic centralizer")
    c, g = cyclic_reduce_nf(G, v)
    if len(c) == 1:
        i, _ = c.syllables[0]
        root = FreeProductNF([(i, 1)])
        return nf_mul(G, g, root, nf_inv(G, g))
    n = len(c)
    for plen in range(1, n + 1):
        if n % plen == 0 and c.syllables == c.syllables[:plen] * (n // plen):
            root = FreeProductNF(c.syllables[:plen])
            return nf_mul(G, g, root, nf_inv(G, g))
    raise AssertionError("unreachable: word is its own period")
