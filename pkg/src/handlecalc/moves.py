"""Applying move scripts to manifold files, with per-move invariant contracts."""
from __future__ import annotations

from dataclasses import dataclass, replace

from . import kirby as K
from .errors import HandleCalcError, InvalidMoveError, InvalidWordError, RefusedError
from .kirby import FramedLink, HandleBody4
from .linalg import AbelianInvariants
from .manifold_file import ManifoldFile, MoveRecord, ParseError, resolve_word, tietze_from_record
from .presentation import tietze_apply


@dataclass(frozen=True)
class Snapshot:
    chi: int
    h1: AbelianInvariants
    boundary: AbelianInvariants | None
    sigma: int | None


def snapshot(mf: ManifoldFile) -> Snapshot:
    L = mf.framed_link
    geometric = L is not None and not L.algebraic_only
    return Snapshot(
        K.euler_characteristic(mf.handlebody),
        K.h1_total(mf.handlebody),
        K.h1_boundary(L) if geometric else None,
        K.link_signature(L) if geometric else None,
    )


def _circle(L: FramedLink, ref) -> int:
    if isinstance(ref, str):
        try:
            return L.index(ref)
        except KeyError:
            raise InvalidMoveError(f"no circle named {ref!r}") from None
    return ref


def _with_link(mf: ManifoldFile, L: FramedLink) -> ManifoldFile:
    old = mf.handlebody
    p = K.presentation_of(L)
    layout = old.layout if p == old.presentation else None
    h = HandleBody4(p, old.n3, old.n4, old.closed, layout)
    return ManifoldFile(h, L, mf.provenance, mf.format_version)


def apply_record(mf: ManifoldFile, rec: MoveRecord) -> ManifoldFile:
    """Apply one move; raises :class:`InvalidMoveError` on any invalid step."""
    a = rec.args
    L = mf.framed_link
    try:
        if rec.kind == "tietze":
            names = mf.handlebody.presentation.generator_names
            move = tietze_from_record(a, names)
            if L is not None:
                return _with_link(mf, K.tietze_on_link(L, move))
            p = tietze_apply(mf.handlebody.presentation, move)
            h = replace(mf.handlebody, presentation=p, layout=None)
            return ManifoldFile(h, None, mf.provenance, mf.format_version)
        if L is None:
            raise InvalidMoveError(f"{rec.kind} needs a framed link, but the file has none")
        if rec.kind == "slide":
            dot_names = [L.circles[i].name for i in L.dotted_indices]
            c = resolve_word(a["conjugator"], dot_names)
            c = tuple((L.dotted_indices[g], s) for g, s in c)
            L = K.handle_slide(L, _circle(L, a["i"]), _circle(L, a["j"]), a["sign"], c)
        elif rec.kind == "swap":
            L = K.dot_surgery_swap(L, _circle(L, a["i"]))
        elif rec.kind == "stabilize":
            L = K.stabilize(L, a.get("framing", 0))
        elif rec.kind == "destabilize":
            L = K.destabilize(L, _circle(L, a["i"]), _circle(L, a["j"]))
        elif rec.kind == "blowup":
            L = K.blow_up(L, a["sign"])
        elif rec.kind == "blowdown":
            L = K.blow_down(L, _circle(L, a["i"]))
        else:
            raise InvalidMoveError(f"unknown move kind {rec.kind!r}")
    except (InvalidWordError, ParseError) as exc:
        raise InvalidMoveError(str(exc)) from None
    return _with_link(mf, L)


def expected_change(rec: MoveRecord, before: ManifoldFile) -> dict:
    """What each move promises: the change of chi and sigma, and what stays fixed."""
    if rec.kind == "swap":
        return {"chi": 2, "h1": None, "boundary": True, "sigma": None}
    if rec.kind == "blowup":
        return {"chi": 1, "h1": True, "boundary": True, "sigma": rec.args["sign"]}
    if rec.kind == "blowdown":
        L = before.framed_link
        framing = L.circles[_circle(L, rec.args["i"])].framing
        return {"chi": -1, "h1": True, "boundary": True, "sigma": -framing}
    return {"chi": 0, "h1": True, "boundary": True, "sigma": 0}


def check_step(rec: MoveRecord, before: ManifoldFile, s0: Snapshot, s1: Snapshot) -> list[str]:
    exp = expected_change(rec, before)
    problems = []
    if s1.chi - s0.chi != exp["chi"]:
        problems.append(f"chi changed {s0.chi} -> {s1.chi}, expected change {exp['chi']:+d}")
    if exp["h1"] and s0.h1 != s1.h1:
        problems.append(f"H1 changed {s0.h1} -> {s1.h1}")
    if exp["boundary"] and s0.boundary is not None and s0.boundary != s1.boundary:
        problems.append(f"boundary H1 changed {s0.boundary} -> {s1.boundary}")
    if exp["sigma"] is not None and s0.sigma is not None and s1.sigma - s0.sigma != exp["sigma"]:
        problems.append(f"signature changed {s0.sigma} -> {s1.sigma}, expected change {exp['sigma']:+d}")
    return problems


class MoveFailure(HandleCalcError):
    def __init__(self, step: int, message: str, violation: bool = False, refused: bool = False):
        super().__init__(f"step {step}: {message}")
        self.step = step
        self.violation = violation
        self.refused = refused


def run_script(mf: ManifoldFile, records, check: bool = False) -> ManifoldFile:
    """Apply ``records`` in order; steps are numbered from 1 in errors."""
    snap = snapshot(mf) if check else None
    for k, rec in enumerate(records, start=1):
        try:
            nxt = apply_record(mf, rec)
        except HandleCalcError as exc:
            raise MoveFailure(k, str(exc), refused=isinstance(exc, RefusedError)) from None
        if check:
            new = snapshot(nxt)
            problems = check_step(rec, mf, snap, new)
            if problems:
                raise MoveFailure(k, "invariant violation: " + "; ".join(problems), violation=True)
            snap = new
        mf = nxt
    return mf
