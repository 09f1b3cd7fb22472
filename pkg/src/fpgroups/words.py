"""Words in free groups, presentations, and the presentation grammar.

A word is a tuple of nonzero ints: generator ``i`` (0-based) is the letter
``i + 1`` and its inverse is ``-(i + 1)``.  The empty tuple is the identity.
Everything here is immutable and side-effect free.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Word = tuple[int, ...]

EMPTY: Word = ()

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class ParseError(ValueError):
    """Syntax or name error in presentation text; ``pos`` is a 0-based offset."""

    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


def letter(index: int, sign: int = 1) -> int:
    return (index + 1) if sign > 0 else -(index + 1)


def gen_index(x: int) -> int:
    return abs(x) - 1


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def invert(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*words: Sequence[int]) -> Word:
    out: list[int] = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def power(w: Sequence[int], n: int) -> Word:
    if n < 0:
        w, n = invert(w), -n
    return free_reduce(tuple(w) * n)


def conjugate(w: Sequence[int], by: Sequence[int]) -> Word:
    """``by^-1 * w * by``."""
    return multiply(invert(by), w, by)


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    """``[u, v] = u^-1 v^-1 u v``."""
    return multiply(invert(u), invert(v), u, v)


def exponent_vector(w: Iterable[int], d: int) -> list[int]:
    vec = [0] * d
    for x in w:
        vec[abs(x) - 1] += 1 if x > 0 else -1
    return vec


def substitute(w: Sequence[int], images: dict[int, Word]) -> Word:
    """Replace each generator index ``g`` in ``images`` by its image word."""
    out: list[int] = []
    for x in w:
        g = abs(x) - 1
        if g in images:
            piece = images[g] if x > 0 else invert(images[g])
        else:
            piece = (x,)
        for y in piece:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def cyclic_canonical(w: Sequence[int]) -> Word:
    """Least rotation of ``w`` or its inverse; equal for cyclically equivalent relators."""
    w = cyclic_reduce(w)
    if not w:
        return w
    best = None
    for cand in (w, invert(w)):
        for i in range(len(cand)):
            r = cand[i:] + cand[:i]
            if best is None or r < best:
                best = r
    return best


@dataclass(frozen=True)
class Presentation:
    """Generator names plus relator words over them."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(tuple(r) for r in self.relators))
        if len(set(self.generators)) != len(self.generators):
            raise ValueError(f"duplicate generator names in {self.generators}")
        for name in self.generators:
            if not _IDENT.match(name):
                raise ValueError(f"bad generator name {name!r}")
        d = len(self.generators)
        for r in self.relators:
            if not r:
                raise ValueError("empty relator")
            if any(x == 0 or abs(x) > d for x in r):
                raise ValueError(f"relator {r} references an undeclared generator")
            if free_reduce(r) != r:
                raise ValueError(f"relator {r} is not freely reduced")

    @classmethod
    def build(cls, generators: Sequence[str], relators: Iterable[Sequence[int]]) -> "Presentation":
        """Cyclically reduce ``relators`` and drop trivial ones."""
        rels = [cyclic_reduce(r) for r in relators]
        return cls(tuple(generators), tuple(r for r in rels if r))

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def length(self) -> int:
        return sum(len(r) for r in self.relators)

    def index(self, name: str) -> int:
        return self.generators.index(name)

    def with_relators(self, extra: Iterable[Sequence[int]]) -> "Presentation":
        return Presentation.build(self.generators, list(self.relators) + list(extra))

    def word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def __str__(self) -> str:
        return format_presentation(self)


# --- grammar -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<int>[+-]?\d+)|(?P<sym>[<>|,=*^()\[\]]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, generators: Sequence[str] | None = None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.names = {g: k for k, g in enumerate(generators)} if generators is not None else None

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self, value: str | None = None, kind: str | None = None) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def at(self, value: str) -> bool:
        tok = self.tokens[self.i]
        return tok[0] == "sym" and tok[1] == value

    def presentation(self) -> Presentation:
        self.take("<")
        gens = [] if self.at("|") else [self.take(kind="ident")[1]]
        while gens and self.at(","):
            self.take(",")
            gens.append(self.take(kind="ident")[1])
        if len(set(gens)) != len(gens):
            raise ParseError("duplicate generator name", self.peek()[2])
        self.names = {g: k for k, g in enumerate(gens)}
        self.take("|")
        relators: list[Word] = []
        if not self.at(">"):
            relators.extend(self.relation())
            while self.at(","):
                self.take(",")
                relators.extend(self.relation())
        self.take(">")
        self.take(kind="end")
        return Presentation.build(gens, relators)

    def relation(self) -> list[Word]:
        sides = [self.word()]
        while self.at("="):
            self.take("=")
            sides.append(self.word())
        if len(sides) == 1:
            return sides
        return [multiply(u, invert(v)) for u, v in zip(sides, sides[1:])]

    def word(self) -> Word:
        w = self.term()
        while self.at("*"):
            self.take("*")
            w = multiply(w, self.term())
        return w

    def term(self) -> Word:
        w = self.atom()
        if self.at("^"):
            self.take("^")
            if self.at("("):
                self.take("(")
                e = int(self.take(kind="int")[1])
                self.take(")")
            else:
                e = int(self.take(kind="int")[1])
            w = power(w, e)
        return w

    def atom(self) -> Word:
        kind, value, pos = self.peek()
        if kind == "int":
            if int(value) != 1 or value.startswith(("+", "-")):
                raise ParseError(f"unexpected integer {value}", pos)
            self.i += 1
            return EMPTY
        if kind == "ident":
            self.i += 1
            if self.names is None or value not in self.names:
                raise ParseError(f"undeclared generator {value!r}", pos)
            return (self.names[value] + 1,)
        if self.at("("):
            self.take("(")
            w = self.word()
            self.take(")")
            return w
        if self.at("["):
            self.take("[")
            u = self.word()
            self.take(",")
            v = self.word()
            # [u, v, w] nests to the left
            w = commutator(u, v)
            while self.at(","):
                self.take(",")
                w = commutator(w, self.word())
            self.take("]")
            return w
        raise ParseError(f"expected a word, found {value or 'end of input'!r}", pos)


def parse_presentation(text: str) -> Presentation:
    """Parse ``< a, b | a^6, b^6, a*b^2 = b*a^2 >``."""
    return _Parser(text).presentation()


def parse_word(text: str, generators: Sequence[str]) -> Word:
    p = _Parser(text, generators)
    w = p.word()
    p.take(kind="end")
    return w


def parse_words(text: str, generators: Sequence[str]) -> list[Word]:
    """Comma-separated list of words; the empty string gives ``[]``."""
    p = _Parser(text, generators)
    if p.peek()[0] == "end":
        return []
    words = [p.word()]
    while p.at(","):
        p.take(",")
        words.append(p.word())
    p.take(kind="end")
    return words


def format_word(w: Sequence[int], generators: Sequence[str]) -> str:
    """Syllable form: ``a*a*a`` prints as ``a^3``, ``a^-1`` stays explicit."""
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = generators[abs(w[i]) - 1]
        e = (j - i) * (1 if w[i] > 0 else -1)
        parts.append(name if e == 1 else f"{name}^{e}")
        i = j
    return "*".join(parts)


def format_presentation(p: Presentation) -> str:
    gens = ", ".join(p.generators)
    rels = ", ".join(format_word(r, p.generators) for r in p.relators)
    return f"< {gens} | {rels} >" if rels else f"< {gens} | >"
