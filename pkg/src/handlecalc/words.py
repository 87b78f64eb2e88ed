"""Free-group words and endomorphisms.

A word is a tuple of letters ``(generator, sign)`` with ``sign`` in ``{+1, -1}``.
Words are stored letter by letter (no run-length encoding); the empty tuple is
the identity.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidEndomorphismError, InvalidWordError

Letter = tuple[int, int]
Word = tuple[Letter, ...]

EMPTY: Word = ()


def _check_letter(letter) -> Letter:
    try:
        g, s = letter
    except (TypeError, ValueError):
        raise InvalidWordError(f"malformed letter {letter!r}") from None
    if not isinstance(g, int) or isinstance(g, bool) or g < 0:
        raise InvalidWordError(f"generator index must be a non-negative integer, got {g!r}")
    if s not in (1, -1):
        raise InvalidWordError(f"exponent sign must be +1 or -1, got {s!r}")
    return (g, int(s))


def reduce(w: Iterable[Letter]) -> Word:
    """Freely reduce ``w`` with a single stack pass."""
    stack: list[Letter] = []
    for letter in w:
        g, s = _check_letter(letter)
        if stack and stack[-1][0] == g and stack[-1][1] == -s:
            stack.pop()
        else:
            stack.append((g, s))
    return tuple(stack)


def is_reduced(w: Sequence[Letter]) -> bool:
    return all(not (a[0] == b[0] and a[1] == -b[1]) for a, b in zip(w, w[1:]))


def inverse(w: Sequence[Letter]) -> Word:
    return tuple((g, -s) for g, s in reversed(w))


def multiply(*words: Sequence[Letter]) -> Word:
    return reduce(letter for w in words for letter in w)


def power(w: Sequence[Letter], n: int) -> Word:
    if n < 0:
        w, n = inverse(w), -n
    return reduce(tuple(w) * n)


def commutator(a: Sequence[Letter], b: Sequence[Letter]) -> Word:
    """``a b a^-1 b^-1``, freely reduced."""
    return multiply(a, b, inverse(a), inverse(b))


def conjugate(w: Sequence[Letter], c: Sequence[Letter]) -> Word:
    """``c w c^-1``."""
    return multiply(c, w, inverse(c))


def gen(i: int, sign: int = 1) -> Word:
    return (_check_letter((i, sign)),)


def exponent_sums(w: Sequence[Letter], n: int) -> list[int]:
    sums = [0] * n
    for g, s in w:
        if g >= n:
            raise InvalidWordError(f"generator index {g} out of range for {n} generators")
        sums[g] += s
    return sums


def max_index(w: Sequence[Letter]) -> int:
    """Largest generator index used in ``w`` (-1 for the empty word)."""
    return max((g for g, _ in w), default=-1)


def cyclic_reduce(w: Sequence[Letter]) -> Word:
    w = reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i][0] == w[j][0] and w[i][1] == -w[j][1]:
        i += 1
        j -= 1
    return w[i:j + 1]


def relabel(w: Sequence[Letter], mapping) -> Word:
    """Rename generators through ``mapping`` (a dict or sequence old -> new)."""
    return tuple((mapping[g], s) for g, s in w)


def delete_generator(w: Sequence[Letter], g: int) -> Word:
    """Drop every occurrence of ``g`` (i.e. set it to the identity) and reduce."""
    return reduce(letter for letter in w if letter[0] != g)


@dataclass(frozen=True)
class FreeEndomorphism:
    """Endomorphism of a free group given by the images of its generators."""

    images: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(reduce(im) for im in self.images))

    @classmethod
    def identity(cls, n: int) -> "FreeEndomorphism":
        return cls(tuple(gen(i) for i in range(n)))

    def __len__(self):
        return len(self.images)

    def __call__(self, w: Sequence[Letter]) -> Word:
        return apply_endomorphism(self, w)

    def compose(self, other: "FreeEndomorphism") -> "FreeEndomorphism":
        """``self o other``: apply ``other`` first."""
        return FreeEndomorphism(tuple(apply_endomorphism(self, im) for im in other.images))

    def extend(self, total: int) -> "FreeEndomorphism":
        """Extend by the identity on generators ``len(self) .. total-1``."""
        extra = tuple(gen(i) for i in range(len(self.images), total))
        return FreeEndomorphism(self.images + extra)


def substitute(f: FreeEndomorphism, w: Sequence[Letter]) -> Word:
    """Letter-by-letter substitution without the final reduction."""
    out: list[Letter] = []
    n = len(f.images)
    for g, s in w:
        _check_letter((g, s))
        if g >= n:
            raise InvalidEndomorphismError(
                f"letter index {g} outside endomorphism with {n} images")
        im = f.images[g]
        out.extend(im if s == 1 else inverse(im))
    return tuple(out)


def apply_endomorphism(f: FreeEndomorphism, w: Sequence[Letter]) -> Word:
    return reduce(substitute(f, w))


# --- text form -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<int>-?\d+)|(?P<op>[\^\[\],()*.]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise InvalidWordError(f"unexpected character {text[pos:].strip()[:1]!r} at offset {pos}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse ``text`` such as ``"x1 y1 x1^-1 [x2,y2]"`` over generator ``names``.

    Supported syntax: juxtaposition (optionally ``*`` or ``.``), ``^n`` powers,
    ``[a,b]`` commutators, parentheses, and ``1`` for the identity.
    """
    index = {name: i for i, name in enumerate(names)}
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None, len(text))

    def take(kind=None, value=None):
        nonlocal pos
        tok = peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            raise InvalidWordError(f"expected {want!r} at offset {tok[2]} in {text!r}")
        pos += 1
        return tok

    def product(stop):
        letters: list[Letter] = []
        while True:
            kind, val, _ = peek()
            if kind is None or (kind == "op" and val in stop):
                return reduce(letters)
            if kind == "op" and val in "*.":
                take()
                continue
            letters.extend(factor())

    def factor():
        kind, val, off = peek()
        if kind == "name":
            take()
            if val not in index:
                raise InvalidWordError(f"unknown generator {val!r} at offset {off}")
            base = gen(index[val])
        elif kind == "int" and val == "1":
            take()
            base = EMPTY
        elif kind == "op" and val == "[":
            take()
            a = product(",")
            take("op", ",")
            b = product("]")
            take("op", "]")
            base = commutator(a, b)
        elif kind == "op" and val == "(":
            take()
            base = product(")")
            take("op", ")")
        else:
            raise InvalidWordError(f"unexpected {val!r} at offset {off} in {text!r}")
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            n = int(take("int")[1])
            base = power(base, n)
        return base

    w = product(())
    if pos != len(tokens):
        raise InvalidWordError(f"trailing input at offset {peek()[2]} in {text!r}")
    return w


def format_word(w: Sequence[Letter], names: Sequence[str]) -> str:
    if not w:
        return "1"
    parts = []
    for g, s in w:
        parts.append(names[g] if s == 1 else f"{names[g]}^-1")
    return " ".join(parts)
