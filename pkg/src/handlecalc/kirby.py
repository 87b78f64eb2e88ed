"""Handle decompositions of 4-manifolds and Kirby moves.

Two layers are modelled.  :class:`HandleBody4` is purely algebraic: the
1-handles and 2-handles give a group presentation, and 3-/4-handles are only
counted.  :class:`FramedLink` is the diagram layer in dotted-circle notation:
every circle carries a dotted flag, an attaching word over the dotted circles
and a framing, and the full symmetric linking matrix is stored.

Words in a framed link name dotted circles by their *circle index*.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Sequence

from . import words as W
from .errors import DomainError, InvalidMoveError, RefusedError
from .linalg import AbelianInvariants, IntMatrix, cokernel, kernel_basis
from .linalg import signature as form_signature
from .presentation import Presentation, TietzeMove, abelian_invariants, t4_pattern
from .words import Word


@dataclass(frozen=True)
class HandleBody4:
    presentation: Presentation
    n3: int = 0
    n4: int = 0
    closed: bool = False
    # builder metadata (a bundles.BundleLayout for bundle outputs); not part of the topology
    layout: Any = field(default=None, compare=True)

    def __post_init__(self):
        if self.n3 < 0 or self.n4 not in (0, 1):
            raise DomainError(f"need n3 >= 0 and n4 in {{0, 1}}, got n3={self.n3}, n4={self.n4}")
        if self.closed and self.n4 != 1:
            raise DomainError("a closed handlebody has exactly one 4-handle")

    @property
    def generator_count(self) -> int:
        return self.presentation.generator_count

    @property
    def relator_count(self) -> int:
        return len(self.presentation.relators)


@dataclass(frozen=True)
class ClosedInvariantReport:
    chi: int
    b1: int
    b2: int
    sigma: int | str
    h1_torsion: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {"chi": self.chi, "b1": self.b1, "b2": self.b2, "sigma": self.sigma,
                "h1_torsion": list(self.h1_torsion)}


def euler_characteristic(h: HandleBody4) -> int:
    return 1 - h.generator_count + h.relator_count - h.n3 + h.n4


def h1_total(h: HandleBody4) -> AbelianInvariants:
    return abelian_invariants(h.presentation)


def closed_invariants(h: HandleBody4, sigma_hint: int | None = None) -> ClosedInvariantReport:
    """Betti numbers of a closed manifold from chi and b1 via Poincare duality.

    ``b2 = chi - 2 + 2 b1`` since ``b0 = b4 = 1`` and ``b3 = b1``.  The
    signature is not computable from the algebraic layer, so it is either the
    caller's ``sigma_hint`` or ``"unknown"``.
    """
    if not h.closed:
        raise DomainError("closed_invariants needs a closed handlebody (n4 = 1, closed flag set)")
    h1 = h1_total(h)
    chi = euler_characteristic(h)
    b2 = chi - 2 + 2 * h1.free_rank
    if b2 < 0:
        raise DomainError(f"inconsistent handle counts: b2 = {b2} < 0")
    sigma = "unknown" if sigma_hint is None else int(sigma_hint)
    return ClosedInvariantReport(chi, h1.free_rank, b2, sigma, h1.torsion)


# --- framed links -----------------------------------------------------------

@dataclass(frozen=True)
class Circle:
    name: str
    dotted: bool
    word: Word = ()
    framing: int = 0


@dataclass(frozen=True)
class FramedLink:
    circles: tuple[Circle, ...]
    linking: IntMatrix
    algebraic_only: bool = False

    def __post_init__(self):
        circles = tuple(self.circles)
        object.__setattr__(self, "circles", circles)
        n = len(circles)
        L = self.linking
        if L.shape != (n, n):
            raise DomainError(f"linking matrix is {L.shape}, expected {(n, n)}")
        if not L.is_symmetric():
            raise DomainError("linking matrix must be symmetric")
        names = [c.name for c in circles]
        if len(set(names)) != n:
            raise DomainError(f"duplicate circle names {names}")
        for i, c in enumerate(circles):
            if c.dotted:
                if c.word or c.framing:
                    raise DomainError(f"dotted circle {c.name} must have empty word and framing 0")
            if L[i, i] != c.framing:
                raise DomainError(f"diagonal entry {i} differs from framing of {c.name}")
            for g, _ in c.word:
                if not (0 <= g < n and circles[g].dotted):
                    raise DomainError(f"word of {c.name} runs over non-dotted circle index {g}")
        for i, c in enumerate(circles):
            if c.dotted:
                continue
            sums = W.exponent_sums(c.word, n)
            for j, d in enumerate(circles):
                if d.dotted and L[i, j] != sums[j]:
                    raise DomainError(
                        f"linking of {c.name} with dotted {d.name} is {L[i, j]}, "
                        f"but the attaching word has exponent sum {sums[j]}")

    @classmethod
    def build(cls, circles: Sequence[Circle], extra: dict | None = None,
              algebraic_only: bool = False) -> "FramedLink":
        """Fill the linking matrix from words and framings.

        ``extra`` maps index pairs ``(i, j)`` to the remaining off-diagonal
        entries (between two 2-handles or two dotted circles); unspecified pairs
        are 0.
        """
        circles = tuple(circles)
        n = len(circles)
        m = [[0] * n for _ in range(n)]
        for i, c in enumerate(circles):
            m[i][i] = c.framing
            if not c.dotted:
                for j, s in enumerate(W.exponent_sums(c.word, n)):
                    if s:
                        m[i][j] = m[j][i] = s
        for (i, j), v in (extra or {}).items():
            if circles[i].dotted != circles[j].dotted or i == j:
                raise DomainError(f"extra linking ({i}, {j}) must join two circles of the same kind")
            m[i][j] = m[j][i] = v
        return cls(circles, IntMatrix.from_rows(m, n), algebraic_only)

    @property
    def dotted_indices(self) -> list[int]:
        return [i for i, c in enumerate(self.circles) if c.dotted]

    @property
    def handle_indices(self) -> list[int]:
        return [i for i, c in enumerate(self.circles) if not c.dotted]

    def index(self, name: str) -> int:
        for i, c in enumerate(self.circles):
            if c.name == name:
                return i
        raise KeyError(name)


def empty_link() -> FramedLink:
    return FramedLink((), IntMatrix.zeros(0, 0))


def presentation_of(L: FramedLink) -> Presentation:
    """Generators are the dotted circles in order; relators the 2-handle words."""
    dots = L.dotted_indices
    pos = {c: k for k, c in enumerate(dots)}
    return Presentation(tuple(L.circles[i].name for i in dots),
                        tuple(W.relabel(L.circles[i].word, pos) for i in L.handle_indices))


def handlebody_of(L: FramedLink, n3: int = 0, n4: int = 0, closed: bool = False) -> HandleBody4:
    return HandleBody4(presentation_of(L), n3, n4, closed)


def link_euler_characteristic(L: FramedLink) -> int:
    return 1 - len(L.dotted_indices) + len(L.handle_indices)


def companion_link(h: HandleBody4, relator_prefix: str = "r") -> FramedLink:
    """Algebraic-only framed link with one dotted circle per generator.

    Linking between 2-handles and dotted circles comes from exponent sums;
    every other off-diagonal entry and all framings default to 0 and are not
    geometric data.
    """
    p = h.presentation
    taken = set(p.generator_names)
    circles = [Circle(name, True) for name in p.generator_names]
    for k, r in enumerate(p.relators):
        name = f"{relator_prefix}{k + 1}"
        while name in taken:
            name += "'"
        taken.add(name)
        circles.append(Circle(name, False, r, 0))
    return FramedLink.build(circles, algebraic_only=True)


def _require_geometric(L: FramedLink, what: str):
    if L.algebraic_only:
        raise RefusedError(
            f"{what} needs geometric linking data, but this link is algebraic-only: its "
            "dotted/dotted and 2-handle/2-handle linking numbers are builder defaults, not "
            "values read from a diagram")


def _check_index(L: FramedLink, i, dotted: bool, what: str) -> int:
    if not isinstance(i, int) or not 0 <= i < len(L.circles):
        raise InvalidMoveError(f"{what}: circle index {i!r} out of range")
    if L.circles[i].dotted != dotted:
        kind = "dotted circle" if dotted else "2-handle"
        raise InvalidMoveError(f"{what}: circle {L.circles[i].name} is not a {kind}")
    return i


def _drop_circles(L: FramedLink, drop: Sequence[int]) -> FramedLink:
    drop = set(drop)
    keep = [i for i in range(len(L.circles)) if i not in drop]
    pos = {old: new for new, old in enumerate(keep)}
    circles = []
    for i in keep:
        c = L.circles[i]
        circles.append(replace(c, word=W.relabel(c.word, pos)))
    return FramedLink(tuple(circles), L.linking.submatrix(keep, keep), L.algebraic_only)


def _fresh(L: FramedLink, stem: str) -> str:
    taken = {c.name for c in L.circles}
    k = 1
    while f"{stem}{k}" in taken:
        k += 1
    return f"{stem}{k}"


def _append(L: FramedLink, new: Sequence[Circle], rows: Sequence[Sequence[int]]) -> FramedLink:
    """Append circles; ``rows[k]`` is the full linking row of ``new[k]``."""
    n, k = len(L.circles), len(new)
    m = [list(r) + [rows[b][a] for b in range(k)] for a, r in enumerate(L.linking.entries)]
    m.extend(list(r) for r in rows)
    return FramedLink(L.circles + tuple(new), IntMatrix.from_rows(m, n + k), L.algebraic_only)


# --- moves ------------------------------------------------------------------

def handle_slide(L: FramedLink, i: int, j: int, sign: int = 1, conjugator: Word = ()) -> FramedLink:
    """Slide 2-handle ``i`` over 2-handle ``j``.

    The linking matrix changes by the symmetric congruence ``E L E^T`` with
    ``E = I + sign * e_ij``; the word picks up ``c w_j^sign c^-1``.
    """
    i = _check_index(L, i, False, "handle_slide")
    j = _check_index(L, j, False, "handle_slide")
    if i == j:
        raise InvalidMoveError("handle_slide: cannot slide a handle over itself")
    if sign not in (1, -1):
        raise InvalidMoveError(f"handle_slide: sign must be +1 or -1, got {sign!r}")
    c = W.reduce(conjugator)
    if any(not (0 <= g < len(L.circles) and L.circles[g].dotted) for g, _ in c):
        raise InvalidMoveError("handle_slide: conjugator must run over dotted circles")
    m = L.linking.tolist()
    old_ij, fi, fj = m[i][j], m[i][i], m[j][j]
    n = len(m)
    for k in range(n):
        m[i][k] += sign * m[j][k]
    for k in range(n):
        m[k][i] = m[i][k]
    m[i][i] = fi + fj + 2 * sign * old_ij
    ci = L.circles[i]
    new_word = W.multiply(ci.word, W.conjugate(W.power(L.circles[j].word, sign), c))
    circles = list(L.circles)
    circles[i] = replace(ci, word=new_word, framing=m[i][i])
    return FramedLink(tuple(circles), IntMatrix.from_rows(m, n), L.algebraic_only)


def dot_surgery_swap(L: FramedLink, i: int) -> FramedLink:
    """Replace dotted circle ``i`` by a 0-framed unknot 2-handle.

    The boundary 3-manifold is unchanged; the 4-manifold is not.  Letters of
    ``i`` disappear from every attaching word since the 1-handle is gone.
    """
    i = _check_index(L, i, True, "dot_surgery_swap")
    _require_geometric(L, "dot_surgery_swap")
    circles = [replace(c, word=W.delete_generator(c.word, i)) for c in L.circles]
    circles[i] = Circle(L.circles[i].name, False, (), 0)
    return FramedLink(tuple(circles), L.linking, L.algebraic_only)


def stabilize(L: FramedLink, framing: int = 0) -> FramedLink:
    """Append a cancelling 1-/2-handle pair (dotted ``d`` and 2-handle over ``d`` once)."""
    n = len(L.circles)
    d = Circle(_fresh(L, "d"), True)
    h = Circle(_fresh(L, "h"), False, ((n, 1),), framing)
    row_d = [0] * n + [0, 1]
    row_h = [0] * n + [1, framing]
    return _append(L, (d, h), (row_d, row_h))


def destabilize(L: FramedLink, i: int, j: int) -> FramedLink:
    """Cancel dotted ``i`` against 2-handle ``j`` running over it exactly once."""
    i = _check_index(L, i, True, "destabilize")
    j = _check_index(L, j, False, "destabilize")
    word = L.circles[j].word
    if len(word) != 1 or word[0][0] != i:
        raise InvalidMoveError(f"destabilize: {L.circles[j].name} does not run over "
                               f"{L.circles[i].name} exactly once")
    if abs(L.linking[i, j]) != 1:
        raise InvalidMoveError("destabilize: linking between the pair must be +-1")
    for k in range(len(L.circles)):
        if k in (i, j):
            continue
        if L.linking[i, k] or L.linking[j, k]:
            raise InvalidMoveError(
                f"destabilize: {L.circles[k].name} links the cancelling pair")
        if any(g == i for g, _ in L.circles[k].word):
            raise InvalidMoveError(
                f"destabilize: {L.circles[k].name} still passes through {L.circles[i].name}")
    return _drop_circles(L, (i, j))


def blow_up(L: FramedLink, sign: int = 1) -> FramedLink:
    if sign not in (1, -1):
        raise InvalidMoveError(f"blow_up: sign must be +1 or -1, got {sign!r}")
    n = len(L.circles)
    e = Circle(_fresh(L, "e"), False, (), sign)
    return _append(L, (e,), ([0] * n + [sign],))


def blow_down(L: FramedLink, i: int) -> FramedLink:
    i = _check_index(L, i, False, "blow_down")
    c = L.circles[i]
    if c.framing not in (1, -1) or c.word:
        raise InvalidMoveError(f"blow_down: {c.name} is not a +-1-framed unknot off the 1-handles")
    if any(L.linking[i, k] for k in range(len(L.circles)) if k != i):
        raise InvalidMoveError(f"blow_down: {c.name} links other circles")
    return _drop_circles(L, (i,))


def tietze_on_link(L: FramedLink, move: TietzeMove) -> FramedLink:
    """Carry a presentation-level Tietze move over to the link.

    Generator and relator indices refer to :func:`presentation_of`.  T1 is a
    handle slide, T2 reverses and/or re-routes an attaching circle, T3 and T4
    add or cancel a 1-/2-handle pair.
    """
    dots, handles = L.dotted_indices, L.handle_indices
    to_circle = lambda w: W.relabel(w, dots)  # noqa: E731

    def handle(k):
        if not isinstance(k, int) or not 0 <= k < len(handles):
            raise InvalidMoveError(f"relator index {k!r} out of range")
        return handles[k]

    def word_over_dots(w):
        if any(not 0 <= g < len(dots) for g, _ in w):
            raise InvalidMoveError("word uses a generator outside the presentation")
        return to_circle(W.reduce(w))

    if move.kind == "T1":
        if move.i == move.j:
            raise InvalidMoveError("T1 needs two distinct relators")
        return handle_slide(L, handle(move.i), handle(move.j), move.sign,
                            word_over_dots(move.conjugator))
    if move.kind == "T2":
        i = handle(move.i)
        c = word_over_dots(move.conjugator)
        ci = L.circles[i]
        m = L.linking.tolist()
        word = ci.word
        if move.invert:
            word = W.inverse(word)
            for k in range(len(m)):
                if k != i:
                    m[i][k] = m[k][i] = -m[i][k]
        circles = list(L.circles)
        circles[i] = replace(ci, word=W.conjugate(word, c))
        return FramedLink(tuple(circles), IntMatrix.from_rows(m, len(m)), L.algebraic_only)
    if move.kind == "T3":
        w = word_over_dots(move.word)
        n = len(L.circles)
        name = move.name or _fresh(L, "z")
        if name in {c.name for c in L.circles}:
            raise InvalidMoveError(f"name {name!r} already in use")
        d = Circle(name, True)
        h = Circle(_fresh(L, "r"), False, W.multiply(W.gen(n), W.inverse(w)), 0)
        sums = W.exponent_sums(h.word, n + 1)
        row_d = [0] * (n + 2)
        row_d[n + 1] = sums[n]
        row_h = [sums[k] if k < n and L.circles[k].dotted else 0 for k in range(n)]
        row_h += [sums[n], 0]
        return _append(L, (d, h), (row_d, row_h))
    if move.kind == "T4":
        p = presentation_of(L)
        k = t4_pattern(p, move.generator)
        i, j = dots[move.generator], handles[k]
        if any(L.linking[i, x] for x in range(len(L.circles)) if x not in (i, j)):
            raise InvalidMoveError("T4: the dotted circle links other circles")
        return _drop_circles(L, (i, j))
    raise InvalidMoveError(f"unknown Tietze move kind {move.kind!r}")


# --- invariants ---------------------------------------------------------------

def h1_boundary(L: FramedLink) -> AbelianInvariants:
    """H1 of the boundary: cokernel of the full linking matrix, dots read as 0-framed."""
    _require_geometric(L, "h1_boundary")
    return cokernel(L.linking)


def boundary_matrix(L: FramedLink) -> IntMatrix:
    """Exponent sums, 2-handles by dotted circles (the cellular boundary map)."""
    return L.linking.submatrix(L.handle_indices, L.dotted_indices)


def intersection_form(L: FramedLink) -> IntMatrix:
    """The 2-handle linking block restricted to the kernel of the boundary map."""
    _require_geometric(L, "intersection_form")
    handles = L.handle_indices
    block = L.linking.submatrix(handles, handles)
    k = kernel_basis(boundary_matrix(L).transpose())
    if not handles:
        return IntMatrix.zeros(0, 0)
    return k.transpose() @ block @ k


def signature(q: IntMatrix) -> int:
    return form_signature(q)


def link_signature(L: FramedLink) -> int:
    return form_signature(intersection_form(L))
