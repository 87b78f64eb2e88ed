"""Finitely presented groups and the restricted Tietze move set."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import words as W
from .errors import InvalidMoveError, InvalidWordError
from .linalg import AbelianInvariants, IntMatrix, cokernel
from .words import Word


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        names = tuple(self.generator_names)
        if len(set(names)) != len(names):
            raise InvalidWordError(f"duplicate generator names in {names}")
        rels = tuple(W.reduce(r) for r in self.relators)
        for k, r in enumerate(rels):
            if W.max_index(r) >= len(names):
                raise InvalidWordError(
                    f"relator {k} uses generator {W.max_index(r)} but only {len(names)} exist")
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relators", rels)

    @classmethod
    def free(cls, n: int, prefix: str = "g") -> "Presentation":
        return cls(tuple(f"{prefix}{i + 1}" for i in range(n)))

    @property
    def generator_count(self) -> int:
        return len(self.generator_names)

    def parse(self, text: str) -> Word:
        return W.parse_word(text, self.generator_names)

    def format(self, w: Word) -> str:
        return W.format_word(w, self.generator_names)

    def __str__(self):
        rels = ", ".join(self.format(r) for r in self.relators)
        return f"< {', '.join(self.generator_names)} | {rels} >"


def abelianization_matrix(p: Presentation) -> IntMatrix:
    """Relator-by-generator matrix of exponent sums."""
    n = p.generator_count
    return IntMatrix.from_rows((W.exponent_sums(r, n) for r in p.relators), n)


def abelian_invariants(p: Presentation) -> AbelianInvariants:
    return cokernel(abelianization_matrix(p))


# --- Tietze moves -------------------------------------------------------------

@dataclass(frozen=True)
class TietzeMove:
    """One of the four reversible move kinds.

    ``T1``  relator ``i`` becomes ``r_i * c r_j^sign c^-1``
    ``T2``  relator ``i`` is inverted (``invert=True``) and/or conjugated by ``conjugator``
    ``T3``  new generator ``name`` with relator ``name * word^-1``
    ``T4``  remove ``generator`` together with its single defining relator
    """

    kind: str
    i: int | None = None
    j: int | None = None
    sign: int = 1
    conjugator: Word = ()
    invert: bool = False
    word: Word = ()
    name: str | None = None
    generator: int | None = None

    def to_json(self, names: Sequence[str]) -> dict:
        d = {"kind": self.kind}
        if self.kind == "T1":
            d.update(i=self.i, j=self.j, sign=self.sign,
                     conjugator=[[names[g], s] for g, s in self.conjugator])
        elif self.kind == "T2":
            d.update(i=self.i, invert=self.invert,
                     conjugator=[[names[g], s] for g, s in self.conjugator])
        elif self.kind == "T3":
            d.update(name=self.name, word=[[names[g], s] for g, s in self.word])
        else:
            d.update(generator=names[self.generator])
        return d


def _check_relator(p: Presentation, i, what="relator") -> int:
    if not isinstance(i, int) or not 0 <= i < len(p.relators):
        raise InvalidMoveError(f"{what} index {i!r} out of range (have {len(p.relators)})")
    return i


def _check_word(p: Presentation, w: Word, what: str) -> Word:
    w = W.reduce(w)
    if W.max_index(w) >= p.generator_count:
        raise InvalidMoveError(f"{what} uses a generator outside the presentation")
    return w


def t4_pattern(p: Presentation, g: int) -> int:
    """Index of the relator that lets ``g`` be removed, or raise.

    The relator must read ``g * w^-1`` with ``w`` free of ``g``, and ``g`` must
    occur in no other relator.
    """
    if not isinstance(g, int) or not 0 <= g < p.generator_count:
        raise InvalidMoveError(f"generator index {g!r} out of range")
    hits = [k for k, r in enumerate(p.relators) if any(x == g for x, _ in r)]
    if len(hits) != 1:
        raise InvalidMoveError(
            f"generator {p.generator_names[g]} occurs in {len(hits)} relators, need exactly 1")
    r = p.relators[hits[0]]
    if not r or r[0] != (g, 1) or any(x == g for x, _ in r[1:]):
        raise InvalidMoveError(
            f"relator {hits[0]} is not of the form {p.generator_names[g]} * w^-1")
    return hits[0]


def remove_generator_index(w: Word, g: int) -> Word:
    return tuple((x - (x > g), s) for x, s in w)


def tietze_apply(p: Presentation, move: TietzeMove) -> Presentation:
    rels = list(p.relators)
    if move.kind == "T1":
        i, j = _check_relator(p, move.i), _check_relator(p, move.j)
        if i == j:
            raise InvalidMoveError("T1 needs two distinct relators")
        if move.sign not in (1, -1):
            raise InvalidMoveError(f"sign must be +1 or -1, got {move.sign!r}")
        c = _check_word(p, move.conjugator, "conjugator")
        rels[i] = W.multiply(rels[i], W.conjugate(W.power(rels[j], move.sign), c))
        return Presentation(p.generator_names, tuple(rels))
    if move.kind == "T2":
        i = _check_relator(p, move.i)
        c = _check_word(p, move.conjugator, "conjugator")
        r = W.inverse(rels[i]) if move.invert else rels[i]
        rels[i] = W.conjugate(r, c)
        return Presentation(p.generator_names, tuple(rels))
    if move.kind == "T3":
        w = _check_word(p, move.word, "defining word")
        name = move.name or _fresh_name(p.generator_names)
        if name in p.generator_names:
            raise InvalidMoveError(f"generator name {name!r} already in use")
        g = p.generator_count
        rels.append(W.multiply(W.gen(g), W.inverse(w)))
        return Presentation(p.generator_names + (name,), tuple(rels))
    if move.kind == "T4":
        g = move.generator
        k = t4_pattern(p, g)
        del rels[k]
        names = p.generator_names[:g] + p.generator_names[g + 1:]
        return Presentation(names, tuple(remove_generator_index(r, g) for r in rels))
    raise InvalidMoveError(f"unknown Tietze move kind {move.kind!r}")


def _fresh_name(names: Sequence[str]) -> str:
    taken = set(names)
    k = 1
    while f"z{k}" in taken:
        k += 1
    return f"z{k}"


def random_tietze_move(p: Presentation, rng, kinds=("T1", "T2", "T3", "T4"),
                       max_conjugator: int = 2) -> TietzeMove | None:
    """Draw a valid move of one of ``kinds`` at random (``None`` if none applies)."""
    options = list(kinds)
    rng.shuffle(options)
    n = p.generator_count

    def rand_word(length):
        return W.reduce((rng.randrange(n), rng.choice((1, -1))) for _ in range(length))

    for kind in options:
        if kind == "T1" and len(p.relators) >= 2:
            i, j = rng.sample(range(len(p.relators)), 2)
            return TietzeMove("T1", i=i, j=j, sign=rng.choice((1, -1)),
                              conjugator=rand_word(rng.randint(0, max_conjugator)) if n else ())
        if kind == "T2" and p.relators:
            return TietzeMove("T2", i=rng.randrange(len(p.relators)), invert=rng.random() < 0.5,
                              conjugator=rand_word(rng.randint(0, max_conjugator)) if n else ())
        if kind == "T3" and n:
            return TietzeMove("T3", word=rand_word(rng.randint(1, 3)))
        if kind == "T4":
            removable = []
            for g in range(n):
                try:
                    t4_pattern(p, g)
                except InvalidMoveError:
                    continue
                removable.append(g)
            if removable:
                return TietzeMove("T4", generator=rng.choice(removable))
    return None
