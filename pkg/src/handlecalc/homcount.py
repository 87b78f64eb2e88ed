"""Exhaustive counting of homomorphisms from a presented group to a finite group.

The search itself runs in a compiled kernel when the extension is built and in
an equivalent pure-Python loop otherwise; ``BACKEND`` records which one was
selected at import.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ResourceLimitError
from .finite import FiniteGroupTable
from .presentation import Presentation

from . import _homcount_py

try:
    from . import _homcount as _compiled
except ImportError:  # extension not built
    _compiled = None

KERNELS = {"python": _homcount_py.count_assignments}
if _compiled is not None:
    KERNELS["cython"] = _compiled.count_assignments

BACKEND = "cython" if _compiled is not None else "python"

DEFAULT_CAP = 10 ** 8


@dataclass(frozen=True)
class SearchPlan:
    order: tuple[int, ...]          # generators in assignment order
    free_generators: int            # generators in no relator; contribute |G| each
    rel_offsets: tuple[int, ...]
    rel_letters: tuple[int, ...]
    due_offsets: tuple[int, ...]
    due_rels: tuple[int, ...]


def plan_search(p: Presentation) -> SearchPlan:
    """Choose a variable order so that relators close as early as possible."""
    rel_gens = [frozenset(g for g, _ in r) for r in p.relators if r]
    relators = [r for r in p.relators if r]
    used = set().union(*rel_gens) if rel_gens else set()
    occurrences = {g: sum(1 for r in relators for x, _ in r if x == g) for g in used}

    order: list[int] = []
    assigned: set[int] = set()
    remaining = set(used)
    while remaining:
        def score(g):
            now = assigned | {g}
            closed = sum(1 for gs in rel_gens if g in gs and gs <= now)
            touching = sum(1 for gs in rel_gens if g in gs and gs & assigned)
            return (closed, touching, occurrences[g], -g)
        g = max(remaining, key=score)
        order.append(g)
        assigned.add(g)
        remaining.remove(g)

    depth_of = {g: d for d, g in enumerate(order)}
    rel_offsets, rel_letters = [0], []
    due: list[list[int]] = [[] for _ in order]
    for k, r in enumerate(relators):
        rel_letters.extend(2 * depth_of[g] + (s < 0) for g, s in r)
        rel_offsets.append(len(rel_letters))
        due[max(depth_of[g] for g, _ in r)].append(k)
    due_offsets, due_rels = [0], []
    for lst in due:
        due_rels.extend(lst)
        due_offsets.append(len(due_rels))
    return SearchPlan(tuple(order), p.generator_count - len(order), tuple(rel_offsets),
                      tuple(rel_letters), tuple(due_offsets), tuple(due_rels))


def count_homs(p: Presentation, group: FiniteGroupTable, cap: int = DEFAULT_CAP,
               backend: str | None = None) -> int:
    """Number of generator assignments in ``group`` satisfying every relator.

    Raises :class:`ResourceLimitError` before searching when
    ``|G| ** generator_count`` exceeds ``cap``.
    """
    required = group.order ** p.generator_count
    if cap < 1:
        raise ValueError("cap must be positive")
    if required > cap:
        raise ResourceLimitError(
            f"search space {group.order}^{p.generator_count} = {required} exceeds cap {cap}",
            required=required, cap=cap)
    kernel = KERNELS[backend or BACKEND]
    plan = plan_search(p)
    n = group.order
    mult = [x for row in group.multiplication for x in row]
    count = kernel(n, len(plan.order), mult, list(group.inverse), group.identity,
                   list(plan.rel_offsets), list(plan.rel_letters),
                   list(plan.due_offsets), list(plan.due_rels))
    return int(count) * n ** plan.free_generators
