"""Independent brute-force oracles: bounded conjugator search, relator
rewriting reachability, and plant-and-recover helpers.

These live in the shipped library (not in the test tree) so the CLI can
expose --verify cross-checking of its own answers.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from .words import GeneratorId, Letter, Word, _letter_key, free_reduce


@dataclass(frozen=True)
class GroupHandle:
    """A group given by an alphabet and a word problem.

    canonical_form, when provided, maps a word to a hashable key that is
    equal for two words iff they represent the same group element; it lets
    brute_conjugator deduplicate conjugates instead of enumerating the
    whole witness ball.
    """

    alphabet: Tuple[GeneratorId, ...]
    word_problem: Callable[[Word], bool]
    canonical_form: Optional[Callable[[Word], object]] = None

    def signed_letters(self) -> List[Letter]:
        out = [(g, s) for g in self.alphabet for s in (1, -1)]
        out.sort(key=_letter_key)
        return out


def _ball(letters: Sequence[Letter], radius: int):
    """Freely reduced words of length <= radius, in length-then-lex order."""
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


def brute_conjugator(u: Word, v: Word, G: GroupHandle, radius: int) -> Optional[Word]:
    """First witness g (length-then-lex) with |g| <= radius and g v g^-1 = u."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    letters = G.signed_letters()
    if G.canonical_form is None:
        for g in _ball(letters, radius):
            if G.word_problem(free_reduce(g * v * ~g * ~u)):
                return g
        return None
    # deduplicated search over distinct conjugates
    key = G.canonical_form
    target = key(u)
    start = key(v)
    if start == target:
        return Word()
    seen = {start}
    frontier: List[Tuple[Word, object]] = [(Word(), start)]
    for _ in range(radius):
        nxt: List[Tuple[Word, object]] = []
        for g, _k in frontier:
            for letter in letters:
                ng = Word((letter,)) * g
                conj = key(free_reduce(ng * v * ~ng))
                if conj in seen:
                    continue
                seen.add(conj)
                if conj == target:
                    return ng
                nxt.append((ng, conj))
        frontier = nxt
    return None


def rewrite_reachable(w1: Word, w2: Word, relators: Sequence[Word], depth: int,
                      node_budget: int = 200000) -> bool:
    """True if w2 is reachable from w1 by <= depth relator insertions
    (deletions arise as inverse insertions) plus free reductions.

    Sound but incomplete: False makes no claim of group inequality.
    Bidirectional search with a node budget.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    moves: List[Word] = []
    for r in relators:
        moves.append(free_reduce(r))
        moves.append(free_reduce(~r))
    a, b = free_reduce(w1), free_reduce(w2)
    if a == b:
        return True
    side_a = {a: 0}
    side_b = {b: 0}
    frontier_a, frontier_b = deque([a]), deque([b])
    nodes = 0
    while (frontier_a or frontier_b) and nodes < node_budget:
        # expand the smaller frontier
        if frontier_b and (not frontier_a or len(frontier_b) <= len(frontier_a)):
            frontier, dist, other = frontier_b, side_b, side_a
        else:
            frontier, dist, other = frontier_a, side_a, side_b
        for _ in range(len(frontier)):
            w = frontier.popleft()
            d = dist[w]
            if d >= depth:
                continue
            for r in moves:
                for pos in range(len(w) + 1):
                    nw = free_reduce(Word(w.letters[:pos] + r.letters + w.letters[pos:]))
                    nodes += 1
                    if nw in other and (d + 1) + other[nw] <= depth:
                        return True
                    if nw not in dist:
                        dist[nw] = d + 1
                        frontier.append(nw)
            if nodes >= node_budget:
                break
    return False


def plant_conjugate(v: Word, g: Word, G: Optional[GroupHandle] = None) -> Word:
    """free_reduce(g v g^-1), for building test instances."""
    return free_reduce(g * v * ~g)
