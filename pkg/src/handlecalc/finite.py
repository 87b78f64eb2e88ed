"""Small finite groups given by multiplication tables."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .errors import DomainError


@dataclass(frozen=True)
class FiniteGroupTable:
    """A group on ``range(order)``; validated exhaustively on construction."""

    order: int
    multiplication: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...]
    identity: int
    name: str = ""

    def __post_init__(self):
        n = self.order
        mul = tuple(tuple(r) for r in self.multiplication)
        object.__setattr__(self, "multiplication", mul)
        object.__setattr__(self, "inverse", tuple(self.inverse))
        if n < 1 or len(mul) != n or any(len(r) != n for r in mul):
            raise DomainError("multiplication table must be order x order")
        if any(not 0 <= x < n for r in mul for x in r):
            raise DomainError("table entries out of range")
        e = self.identity
        if not 0 <= e < n or any(mul[e][a] != a or mul[a][e] != a for a in range(n)):
            raise DomainError(f"{e} is not a two-sided identity")
        if len(self.inverse) != n or any(
                mul[a][self.inverse[a]] != e or mul[self.inverse[a]][a] != e for a in range(n)):
            raise DomainError("inverse list is wrong")
        for a in range(n):
            for b in range(n):
                ab = mul[a][b]
                for c in range(n):
                    if mul[ab][c] != mul[a][mul[b][c]]:
                        raise DomainError(f"not associative at ({a}, {b}, {c})")

    def mul(self, a: int, b: int) -> int:
        return self.multiplication[a][b]

    def evaluate(self, w, values) -> int:
        """Image of word ``w`` under the assignment ``values[g]``."""
        x = self.identity
        for g, s in w:
            v = values[g] if s == 1 else self.inverse[values[g]]
            x = self.multiplication[x][v]
        return x

    def is_abelian(self) -> bool:
        m = self.multiplication
        return all(m[a][b] == m[b][a] for a in range(self.order) for b in range(a))


def cyclic_group(n: int) -> FiniteGroupTable:
    return FiniteGroupTable(
        n, tuple(tuple((a + b) % n for b in range(n)) for a in range(n)),
        tuple((-a) % n for a in range(n)), 0, name=f"Z/{n}")


def symmetric_group(k: int) -> FiniteGroupTable:
    elems = sorted(permutations(range(k)))
    index = {p: i for i, p in enumerate(elems)}
    # (p*q)(x) = p(q(x)): apply q first
    mul = tuple(tuple(index[tuple(p[q[x]] for x in range(k))] for q in elems) for p in elems)
    inv = []
    for p in elems:
        q = [0] * k
        for x, y in enumerate(p):
            q[y] = x
        inv.append(index[tuple(q)])
    return FiniteGroupTable(len(elems), mul, tuple(inv), index[tuple(range(k))], name=f"S{k}")


NAMED_GROUPS = {
    "z2": lambda: cyclic_group(2),
    "z3": lambda: cyclic_group(3),
    "s3": lambda: symmetric_group(3),
}


def named_group(name: str) -> FiniteGroupTable:
    try:
        return NAMED_GROUPS[name.lower()]()
    except KeyError:
        raise DomainError(f"unknown group {name!r}; choose from {sorted(NAMED_GROUPS)}") from None
