"""Generator alphabets, words, free and cyclic reduction, presentations.

A word is a sequence of letters (generator, sign) with sign in {+1, -1}.
Run-length compression appears only in the textual grammar ("a^3"); in
memory every letter carries exponent +-1 so rewriting code stays uniform.
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple


@dataclass(frozen=True, order=True)
class GeneratorId:
    namespace: str  # "" for global symbols such as stable letters
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("generator name must be nonempty")

    def __str__(self):
        return f"{self.namespace}.{self.name}" if self.namespace else self.name


Letter = Tuple[GeneratorId, int]


def gen(name: str, namespace: str = "") -> GeneratorId:
    return GeneratorId(namespace, name)


class Word:
    """A raw word; may be unreduced."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        letters = tuple(letters)
        for g, s in letters:
            if not isinstance(g, GeneratorId) or s not in (1, -1):
                raise ValueError(f"malformed letter {(g, s)!r}")
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __invert__(self) -> "Word":
        return Word([(g, -s) for g, s in reversed(self.letters)])

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return (~self) ** (-n)
        return Word(self.letters * n)

    def __repr__(self):
        return f"Word({format_word(self)!r})"


def word(*items) -> Word:
    """Convenience constructor from (GeneratorId, sign) pairs or GeneratorIds."""
    letters = []
    for it in items:
        if isinstance(it, GeneratorId):
            letters.append((it, 1))
        else:
            letters.append(it)
    return Word(letters)


def _letter_key(letter: Letter):
    g, s = letter
    return (g.namespace, g.name, s)


def free_reduce(w: Word) -> Word:
    """Freely reduce w; the result is a fixed point of one-step cancellation."""
    out: List[Letter] = []
    for g, s in w:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return Word(out)


def is_reduced(w: Word) -> bool:
    return free_reduce(w) == w


def cyclic_reduce(w: Word) -> Tuple["CyclicWord", Word]:
    """Return (c, conjugator) with conjugator * c * ~conjugator == free_reduce(w)."""
    r = list(free_reduce(w).letters)
    shell: List[Letter] = []
    while len(r) >= 2 and r[0][0] == r[-1][0] and r[0][1] == -r[-1][1]:
        shell.append(r[0])
        r = r[1:-1]
    # the stored rotation is canonical; fold the rotation prefix into the shell
    best_i = 0
    for i in range(1, len(r)):
        rot = r[i:] + r[:i]
        if [_letter_key(x) for x in rot] < [_letter_key(x) for x in (r[best_i:] + r[:best_i])]:
            best_i = i
    return CyclicWord(r), Word(shell + r[:best_i])


class CyclicWord(Word):
    """A cyclically reduced word stored at its lexicographically least rotation."""

    def __init__(self, letters: Iterable[Letter] = ()):
        letters = tuple(letters)
        w = Word(letters)
        if free_reduce(w) != w:
            raise ValueError("cyclic word must be reduced")
        if len(letters) >= 2:
            a, b = letters[0], letters[-1]
            if a[0] == b[0] and a[1] == -b[1]:
                raise ValueError("cyclic word must be cyclically reduced")
        best = letters
        for i in range(1, len(letters)):
            rot = letters[i:] + letters[:i]
            if [_letter_key(x) for x in rot] < [_letter_key(x) for x in best]:
                best = rot
        super().__init__(best)

    def rotations(self) -> List[Word]:
        n = len(self.letters)
        return [Word(self.letters[i:] + self.letters[:i]) for i in range(n)]


@dataclass(frozen=True)
class Presentation:
    generators: frozenset
    relators: tuple

    def __post_init__(self):
        for r in self.relators:
            for g, _ in r:
                if g not in self.generators:
                    raise ValueError(f"relator uses undeclared generator {g}")


def make_presentation(generators: Iterable[GeneratorId], relators: Iterable[Word]) -> Presentation:
    return Presentation(frozenset(generators), tuple(relators))


# --- textual grammar ---------------------------------------------------------
#
# Tokens separated by whitespace; token = NAME or NAME^INT with INT a nonzero
# signed decimal; NAME = [A-Za-z][A-Za-z0-9_]* optionally prefixed "vertex.".
# The empty string denotes the identity.

import re

_NAME_RE = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(?:\.([A-Za-z][A-Za-z0-9_]*))?$")
_INT_RE = re.compile(r"^[+-]?[0-9]+$")


def _parse_name(text: str) -> GeneratorId:
    m = _NAME_RE.match(text)
    if not m:
        raise ValueError(f"malformed generator name {text!r}")
    if m.group(2) is not None:
        return GeneratorId(m.group(1), m.group(2))
    return GeneratorId("", m.group(1))


def parse_word(text: str, alphabet: Optional[Iterable[GeneratorId]] = None) -> Word:
    allowed = frozenset(alphabet) if alphabet is not None else None
    letters: List[Letter] = []
    for tok in text.split():
        if "^" in tok:
            name, _, exp = tok.partition("^")
            if not _INT_RE.match(exp) or int(exp) == 0:
                raise ValueError(f"malformed exponent in token {tok!r}")
            k = int(exp)
        else:
            name, k = tok, 1
        g = _parse_name(name)
        if allowed is not None and g not in allowed:
            raise ValueError(f"unknown generator {g} in {text!r}")
        sign = 1 if k > 0 else -1
        letters.extend([(g, sign)] * abs(k))
    return Word(letters)


def format_word(w: Word) -> str:
    """Inverse of parse_word on reduced words; run-length compresses."""
    parts: List[str] = []
    i, letters = 0, w.letters
    while i < len(letters):
        g, s = letters[i]
        j = i
        while j < len(letters) and letters[j] == (g, s):
            j += 1
        k = (j - i) * s
        parts.append(str(g) if k == 1 else f"{g}^{k}")
        i = j
    return " ".join(parts)
