"""Surface bundles over surfaces and the CaCiMe assembly.

Generator layout of every bundle built here: the ``2g`` fiber generators
``x1, y1, ..., xg, yg`` come first, followed by the ``2h`` base generators.
Relator layout: the fiber relator, then one conjugation relator
``t x t^-1 phi(x)^-1`` per (base generator, fiber generator) pair in that
nesting order, then the lifted base relator (absent once punctured).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import words as W
from .errors import DomainError, InvalidSpecError
from .kirby import Circle, ClosedInvariantReport, FramedLink, HandleBody4
from .linalg import IntMatrix
from .presentation import Presentation
from .words import FreeEndomorphism, Word


@dataclass(frozen=True)
class SurfaceGroupData:
    genus: int
    presentation: Presentation

    @property
    def relator(self) -> Word:
        return self.presentation.relators[0]


def fiber_names(g: int) -> tuple[str, ...]:
    return tuple(f"{c}{i}" for i in range(1, g + 1) for c in "xy")


def surface_relator(g: int, offset: int = 0) -> Word:
    """``[x1,y1] ... [xg,yg]`` on generators ``offset .. offset+2g-1``."""
    return W.multiply(*(W.commutator(W.gen(offset + 2 * i), W.gen(offset + 2 * i + 1))
                        for i in range(g)))


def surface_presentation(g: int) -> SurfaceGroupData:
    if not isinstance(g, int) or g < 1:
        raise DomainError(f"surface genus must be a positive integer, got {g!r}")
    return SurfaceGroupData(g, Presentation(fiber_names(g), (surface_relator(g),)))


def surface_times_disk(g: int) -> tuple[HandleBody4, FramedLink]:
    """Sigma_g x D^2 with its standard dotted-circle diagram.

    The 2g dotted circles form an unlink and the single 0-framed 2-handle runs
    along the product of commutators, so every linking number is 0.
    """
    s = surface_presentation(g)
    circles = [Circle(name, True) for name in s.presentation.generator_names]
    circles.append(Circle("c", False, s.relator, 0))
    return HandleBody4(s.presentation), FramedLink.build(circles)


def default_tau2() -> FreeEndomorphism:
    """The handle-swapping involution of the genus-2 surface group.

    ``x1 -> x2``, ``y1 -> y2``, ``x2 -> k x1 k^-1``, ``y2 -> k y1 k^-1`` with
    ``k = [x2, y2]^-1``; it fixes ``[x1,y1][x2,y2]`` on the nose.
    """
    x1, y1, x2, y2 = (W.gen(i) for i in range(4))
    k = W.inverse(W.commutator(x2, y2))
    return FreeEndomorphism((x2, y2, W.conjugate(x1, k), W.conjugate(y1, k)))


def abelianize_endomorphism(f: FreeEndomorphism, n: int | None = None) -> IntMatrix:
    """Integer matrix of the induced map on ``Z^n``; column ``i`` is the image of ``e_i``."""
    n = len(f.images) if n is None else n
    cols = [W.exponent_sums(im, n) for im in f.images]
    return IntMatrix.from_rows(zip(*cols), len(cols)) if n else IntMatrix.zeros(0, len(cols))


@dataclass(frozen=True)
class BundleSpec:
    fiber_genus: int
    base_genus: int
    monodromies: tuple[FreeEndomorphism, ...]
    base_relator_lift: Word = ()

    def __post_init__(self):
        g, h = self.fiber_genus, self.base_genus
        if not isinstance(g, int) or g < 1 or not isinstance(h, int) or h < 1:
            raise InvalidSpecError(f"fiber and base genus must be >= 1, got {g}, {h}")
        mons = tuple(self.monodromies)
        object.__setattr__(self, "monodromies", mons)
        object.__setattr__(self, "base_relator_lift", W.reduce(self.base_relator_lift))
        if len(mons) != 2 * h:
            raise InvalidSpecError(f"need {2 * h} monodromies, got {len(mons)}")
        r = surface_relator(g)
        for k, f in enumerate(mons):
            if len(f.images) != 2 * g:
                raise InvalidSpecError(f"monodromy {k} has {len(f.images)} images, need {2 * g}")
            if any(W.max_index(im) >= 2 * g for im in f.images):
                raise InvalidSpecError(f"monodromy {k} leaves the fiber generators")
            if W.apply_endomorphism(f, r) != r:
                raise InvalidSpecError(f"monodromy {k} does not fix the fiber relator")
        if W.max_index(self.base_relator_lift) >= 2 * g:
            raise InvalidSpecError("base relator lift must be a word in the fiber generators")


@dataclass(frozen=True)
class BundleLayout:
    """Builder bookkeeping carried by a :class:`HandleBody4`.

    ``monodromies`` is ``None`` when a fiber sum glued through a non-identity
    map, since the rewritten relators are then no longer of monodromy form.
    """

    fiber_genus: int
    base_genus: int
    monodromies: tuple[FreeEndomorphism, ...] | None
    base_relator_lift: Word = ()
    punctured: bool = False
    base_names: tuple[str, ...] = field(default=())


def _base_relator(fiber_gens: int, base_genus: int, lift: Word) -> Word:
    base = W.multiply(*(W.commutator(W.gen(fiber_gens + 2 * j), W.gen(fiber_gens + 2 * j + 1))
                        for j in range(base_genus)))
    return W.multiply(base, W.inverse(lift))


def _conjugation_relators(n_fiber: int, base_gen: int, images: Sequence[Word]) -> list[Word]:
    t = W.gen(base_gen)
    return [W.multiply(t, W.gen(i), W.inverse(t), W.inverse(images[i])) for i in range(n_fiber)]


def build_bundle(spec: BundleSpec, base_prefix: str = "t") -> HandleBody4:
    """Closed handlebody of the Sigma_g bundle over Sigma_h with the given monodromies."""
    g, h = spec.fiber_genus, spec.base_genus
    nf = 2 * g
    base_names = tuple(f"{base_prefix}{j + 1}" for j in range(2 * h))
    rels = [surface_relator(g)]
    for j, f in enumerate(spec.monodromies):
        rels.extend(_conjugation_relators(nf, nf + j, f.images))
    rels.append(_base_relator(nf, h, spec.base_relator_lift))
    layout = BundleLayout(g, h, spec.monodromies, spec.base_relator_lift, False, base_names)
    return HandleBody4(Presentation(fiber_names(g) + base_names, tuple(rels)),
                       n3=nf + 2 * h, n4=1, closed=True, layout=layout)


def _bundle_layout(b: HandleBody4, what: str) -> BundleLayout:
    if not isinstance(b.layout, BundleLayout):
        raise DomainError(f"{what} needs a handlebody produced by build_bundle or fiber_sum")
    return b.layout


def puncture_fiber(b: HandleBody4) -> HandleBody4:
    """Remove a fiber neighbourhood Sigma_g x D^2: drop the base 2-handle and close-up handles."""
    lay = _bundle_layout(b, "puncture_fiber")
    if lay.punctured:
        raise DomainError("handlebody is already fiber-punctured")
    p = b.presentation
    layout = BundleLayout(lay.fiber_genus, lay.base_genus, lay.monodromies,
                          lay.base_relator_lift, True, lay.base_names)
    return HandleBody4(Presentation(p.generator_names, p.relators[:-1]),
                       n3=2 * lay.base_genus, n4=0, closed=False, layout=layout)


def fill_fiber(b: HandleBody4) -> HandleBody4:
    """Inverse of :func:`puncture_fiber`."""
    lay = _bundle_layout(b, "fill_fiber")
    if not lay.punctured:
        raise DomainError("handlebody is not fiber-punctured")
    p = b.presentation
    nf = 2 * lay.fiber_genus
    rel = _base_relator(nf, lay.base_genus, lay.base_relator_lift)
    layout = BundleLayout(lay.fiber_genus, lay.base_genus, lay.monodromies,
                          lay.base_relator_lift, False, lay.base_names)
    return HandleBody4(Presentation(p.generator_names, p.relators + (rel,)),
                       n3=nf + 2 * lay.base_genus, n4=1, closed=True, layout=layout)


def fiber_sum(b1: HandleBody4, b2: HandleBody4, gluing_map: FreeEndomorphism | None = None,
              gluing_word: Word = (), base_prefix: str = "s") -> HandleBody4:
    """Fiber sum of two closed bundles with the same fiber genus.

    The fiber of ``b2`` is identified with that of ``b1`` through
    ``gluing_map``, which rewrites ``b2``'s conjugation relators.  Each
    summand's base 2-cell is removed; the new base relator is
    ``prod [t..] prod [s..] u^-1`` with ``u = gluing_word``.
    """
    l1, l2 = _bundle_layout(b1, "fiber_sum"), _bundle_layout(b2, "fiber_sum")
    if l1.punctured or l2.punctured:
        raise DomainError("fiber_sum needs closed bundles")
    g = l1.fiber_genus
    if l2.fiber_genus != g:
        raise DomainError(f"fiber genus mismatch: {g} vs {l2.fiber_genus}")
    nf = 2 * g
    if gluing_map is None:
        gluing_map = FreeEndomorphism.identity(nf)
    if len(gluing_map.images) != nf or any(W.max_index(im) >= nf for im in gluing_map.images):
        raise InvalidSpecError(f"gluing map must have {nf} images over the fiber generators")
    if W.apply_endomorphism(gluing_map, surface_relator(g)) != surface_relator(g):
        raise InvalidSpecError("gluing map does not fix the fiber relator")

    h1, h2 = l1.base_genus, l2.base_genus
    n1_base, n2_base = 2 * h1, 2 * h2
    total = nf + n1_base + n2_base
    u = W.reduce(gluing_word)
    if W.max_index(u) >= total:
        raise InvalidSpecError("gluing word uses a generator outside the fiber sum")

    p1, p2 = b1.presentation, b2.presentation
    base2_names = tuple(f"{base_prefix}{j + 1}" for j in range(n2_base))
    names = p1.generator_names[:nf + n1_base] + base2_names
    if len(set(names)) != len(names):
        raise InvalidSpecError(f"generator names collide in fiber sum: {names}")

    # b2: fiber letters through the gluing map, base letters shifted past b1's base
    rewrite = FreeEndomorphism(
        tuple(gluing_map.images)
        + tuple(W.gen(nf + n1_base + k) for k in range(n2_base)))
    conj1 = p1.relators[1:1 + nf * n1_base]
    conj2 = tuple(W.apply_endomorphism(rewrite, r) for r in p2.relators[1:1 + nf * n2_base])
    base = W.multiply(
        *(W.commutator(W.gen(nf + 2 * j), W.gen(nf + 2 * j + 1)) for j in range((n1_base + n2_base) // 2)),
        W.inverse(u))
    rels = (p1.relators[0],) + conj1 + conj2 + (base,)

    identity = gluing_map == FreeEndomorphism.identity(nf)
    mons = None
    if identity and l1.monodromies is not None and l2.monodromies is not None:
        mons = l1.monodromies + l2.monodromies
    layout = BundleLayout(g, h1 + h2, mons, u, False, names[nf:])
    return HandleBody4(Presentation(names, rels), n3=nf + n1_base + n2_base, n4=1,
                       closed=True, layout=layout)


def trivial_bundle_spec(g: int = 2, h: int = 1) -> BundleSpec:
    return BundleSpec(g, h, tuple(FreeEndomorphism.identity(2 * g) for _ in range(2 * h)))


def twisted_bundle_spec(tau: FreeEndomorphism | None = None) -> BundleSpec:
    """Sigma_2 x S^1 x [0,1] glued by ``tau`` at the ends: monodromy ``tau`` around t1."""
    tau = default_tau2() if tau is None else tau
    return BundleSpec(2, 1, (tau, FreeEndomorphism.identity(4)))


def build_E() -> HandleBody4:
    return build_bundle(trivial_bundle_spec(2, 1))


def build_E_prime(tau: FreeEndomorphism | None = None) -> HandleBody4:
    return build_bundle(twisted_bundle_spec(tau))


def build_cacime(gluing_map: FreeEndomorphism | None = None, u: Word = ()) -> HandleBody4:
    """Genus-2 bundle over a genus-2 surface assembled as the fiber sum of E and E'."""
    return fiber_sum(build_E(), build_E_prime(), gluing_map, u)


# --- numerical checks -------------------------------------------------------

def multiplicativity_check(chi_cover: int, sigma_cover: int, degree: int,
                           chi_quot: int, sigma_quot: int) -> bool:
    """Euler characteristic and signature multiply by the degree of a free finite cover."""
    if degree < 1:
        raise DomainError(f"cover degree must be >= 1, got {degree}")
    return chi_cover == degree * chi_quot and sigma_cover == degree * sigma_quot


@dataclass(frozen=True)
class ChernData:
    q: int
    p_g: int
    K2: int
    c2: int
    sigma: int
    b1: int
    b2: int | None = None


def characteristic_identities_check(c: ChernData) -> bool:
    """Noether's formula, ``3 sigma = K^2 - 2 c2``, ``b1 = 2q`` and, when given, ``b2 = c2 - 2 + 2 b1``."""
    ok = (12 * (1 - c.q + c.p_g) == c.K2 + c.c2
          and 3 * c.sigma == c.K2 - 2 * c.c2
          and c.b1 == 2 * c.q)
    if c.b2 is not None:
        ok = ok and c.b2 == c.c2 - 2 + 2 * c.b1
    return ok


def homology_model_check(r: ClosedInvariantReport, a: int, b: int) -> bool:
    """Does ``r`` have the homology of ``#a (S^2 x S^2) # b (S^1 x S^3)``?"""
    return (r.b1 == b and r.b2 == 2 * a and r.sigma == 0 and not r.h1_torsion
            and r.chi == 2 - 2 * b + 2 * a)
