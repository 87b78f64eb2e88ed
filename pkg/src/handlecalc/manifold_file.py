"""JSON file formats: manifold files and move scripts (format version 1)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import words as W
from .bundles import BundleLayout
from .errors import HandleCalcError
from .kirby import Circle, FramedLink, HandleBody4, presentation_of
from .linalg import IntMatrix
from .presentation import Presentation, TietzeMove
from .words import FreeEndomorphism, Word

FORMAT_VERSION = 1

MOVE_KINDS = ("slide", "swap", "stabilize", "destabilize", "blowup", "blowdown", "tietze")


class ParseError(HandleCalcError):
    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


@dataclass(frozen=True)
class ManifoldFile:
    handlebody: HandleBody4
    framed_link: FramedLink | None = None
    provenance: dict = field(default_factory=dict, compare=True)
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        if self.framed_link is not None:
            derived = presentation_of(self.framed_link)
            if derived != self.handlebody.presentation:
                raise HandleCalcError(
                    "framed link and handlebody disagree: the link's dotted circles and "
                    "2-handle words must reproduce the presentation")


# --- writing ------------------------------------------------------------------

def word_to_json(w: Word, names: Sequence[str]) -> list:
    return [[names[g], s] for g, s in w]


def _layout_to_json(lay: BundleLayout, names: Sequence[str]) -> dict:
    fiber = names[:2 * lay.fiber_genus]
    return {
        "fiber_genus": lay.fiber_genus,
        "base_genus": lay.base_genus,
        "punctured": lay.punctured,
        "base_names": list(lay.base_names),
        "base_relator_lift": word_to_json(lay.base_relator_lift, names),
        "monodromies": None if lay.monodromies is None else [
            [word_to_json(im, fiber) for im in f.images] for f in lay.monodromies],
    }


def handlebody_to_json(h: HandleBody4) -> dict:
    names = h.presentation.generator_names
    return {
        "generators": list(names),
        "relators": [word_to_json(r, names) for r in h.presentation.relators],
        "n3": h.n3,
        "n4": h.n4,
        "closed": h.closed,
        "layout": None if h.layout is None else _layout_to_json(h.layout, names),
    }


def link_to_json(L: FramedLink) -> dict:
    names = [c.name for c in L.circles]
    return {
        "algebraic_only": L.algebraic_only,
        "circles": [{"name": c.name, "dotted": c.dotted, "word": word_to_json(c.word, names),
                     "framing": c.framing} for c in L.circles],
        "linking": L.linking.tolist(),
    }


def to_json(mf: ManifoldFile) -> dict:
    return {
        "format_version": mf.format_version,
        "provenance": mf.provenance,
        "handlebody": handlebody_to_json(mf.handlebody),
        "framed_link": None if mf.framed_link is None else link_to_json(mf.framed_link),
    }


def dumps(obj: Any) -> str:
    """Deterministic JSON text (fixed key order, two-space indent, trailing newline)."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def serialize(mf: ManifoldFile) -> str:
    return dumps(to_json(mf))


# --- reading ------------------------------------------------------------------

def _expect(obj, typ, loc, what=None):
    if typ is int:
        ok = isinstance(obj, int) and not isinstance(obj, bool)
    else:
        ok = isinstance(obj, typ)
    if not ok:
        name = what or (typ.__name__ if isinstance(typ, type) else "value")
        raise ParseError(f"expected {name}, got {type(obj).__name__}", loc)
    return obj


def _key(d: dict, key: str, loc: str, default=...):
    if key not in d:
        if default is ...:
            raise ParseError(f"missing key {key!r}", loc)
        return default
    return d[key]


def word_from_json(data, names: Sequence[str], loc: str) -> Word:
    index = {n: i for i, n in enumerate(names)}
    letters = []
    for k, item in enumerate(_expect(data, list, loc, "word (list of [name, exponent])")):
        here = f"{loc}[{k}]"
        if not isinstance(item, list) or len(item) != 2:
            raise ParseError("letter must be a [name, exponent] pair", here)
        name, e = item
        if name not in index:
            raise ParseError(f"unknown generator {name!r}", here)
        _expect(e, int, here, "integer exponent")
        letters.extend([(index[name], 1 if e > 0 else -1)] * abs(e))
    return W.reduce(letters)


def _layout_from_json(d, names, loc) -> BundleLayout:
    _expect(d, dict, loc, "object")
    g = _expect(_key(d, "fiber_genus", loc), int, f"{loc}.fiber_genus")
    h = _expect(_key(d, "base_genus", loc), int, f"{loc}.base_genus")
    fiber = names[:2 * g]
    mons = _key(d, "monodromies", loc, None)
    if mons is not None:
        mons = tuple(
            FreeEndomorphism(tuple(word_from_json(im, fiber, f"{loc}.monodromies[{a}][{b}]")
                                   for b, im in enumerate(_expect(f, list, f"{loc}.monodromies[{a}]"))))
            for a, f in enumerate(_expect(mons, list, f"{loc}.monodromies")))
    return BundleLayout(
        g, h, mons,
        word_from_json(_key(d, "base_relator_lift", loc, []), names, f"{loc}.base_relator_lift"),
        bool(_key(d, "punctured", loc, False)),
        tuple(_key(d, "base_names", loc, [])))


def handlebody_from_json(d, loc="$.handlebody") -> HandleBody4:
    _expect(d, dict, loc, "object")
    names = _expect(_key(d, "generators", loc), list, f"{loc}.generators")
    for k, n in enumerate(names):
        _expect(n, str, f"{loc}.generators[{k}]", "string")
    rels = tuple(word_from_json(r, names, f"{loc}.relators[{k}]")
                 for k, r in enumerate(_expect(_key(d, "relators", loc), list, f"{loc}.relators")))
    layout = _key(d, "layout", loc, None)
    if layout is not None:
        layout = _layout_from_json(layout, names, f"{loc}.layout")
    try:
        return HandleBody4(
            Presentation(tuple(names), rels),
            n3=_expect(_key(d, "n3", loc, 0), int, f"{loc}.n3"),
            n4=_expect(_key(d, "n4", loc, 0), int, f"{loc}.n4"),
            closed=_expect(_key(d, "closed", loc, False), bool, f"{loc}.closed", "boolean"),
            layout=layout)
    except ParseError:
        raise
    except HandleCalcError as exc:
        raise ParseError(str(exc), loc) from None


def link_from_json(d, loc="$.framed_link") -> FramedLink:
    _expect(d, dict, loc, "object")
    raw = _expect(_key(d, "circles", loc), list, f"{loc}.circles")
    names = []
    for k, c in enumerate(raw):
        _expect(c, dict, f"{loc}.circles[{k}]", "object")
        names.append(_expect(_key(c, "name", f"{loc}.circles[{k}]"), str, f"{loc}.circles[{k}].name", "string"))
    circles = []
    for k, c in enumerate(raw):
        here = f"{loc}.circles[{k}]"
        circles.append(Circle(
            names[k],
            _expect(_key(c, "dotted", here), bool, f"{here}.dotted", "boolean"),
            word_from_json(_key(c, "word", here, []), names, f"{here}.word"),
            _expect(_key(c, "framing", here, 0), int, f"{here}.framing")))
    rows = _expect(_key(d, "linking", loc), list, f"{loc}.linking")
    for a, row in enumerate(rows):
        for b, x in enumerate(_expect(row, list, f"{loc}.linking[{a}]")):
            _expect(x, int, f"{loc}.linking[{a}][{b}]")
    try:
        return FramedLink(tuple(circles), IntMatrix.from_rows(rows, len(circles)),
                          _expect(_key(d, "algebraic_only", loc, False), bool,
                                  f"{loc}.algebraic_only", "boolean"))
    except ParseError:
        raise
    except (HandleCalcError, ValueError) as exc:
        raise ParseError(str(exc), loc) from None


def from_json(d) -> ManifoldFile:
    _expect(d, dict, "$", "object")
    version = _key(d, "format_version", "$")
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {version!r}", "$.format_version")
    h = handlebody_from_json(_key(d, "handlebody", "$"))
    link = _key(d, "framed_link", "$", None)
    link = None if link is None else link_from_json(link)
    prov = _expect(_key(d, "provenance", "$", {}), dict, "$.provenance", "object")
    try:
        return ManifoldFile(h, link, prov)
    except HandleCalcError as exc:
        raise ParseError(str(exc), "$.framed_link") from None


def loads_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None


def parse(text: str) -> ManifoldFile:
    return from_json(loads_json(text))


# --- move scripts ---------------------------------------------------------------

@dataclass(frozen=True)
class MoveRecord:
    kind: str
    args: dict


def _int_arg(rec: dict, key: str, loc: str, default=...):
    return _expect(_key(rec, key, loc, default), int, f"{loc}.{key}")


def _circle_ref(rec: dict, key: str, loc: str):
    v = _key(rec, key, loc)
    if isinstance(v, str) or (isinstance(v, int) and not isinstance(v, bool)):
        return v
    raise ParseError("expected circle index or name", f"{loc}.{key}")


def _raw_word(rec: dict, key: str, loc: str):
    v = _key(rec, key, loc, [])
    if isinstance(v, str):
        return v
    _expect(v, list, f"{loc}.{key}", "word")
    for k, item in enumerate(v):
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], str)
                and isinstance(item[1], int) and not isinstance(item[1], bool)):
            raise ParseError("letter must be a [name, exponent] pair", f"{loc}.{key}[{k}]")
    return v


def parse_move_record(rec, loc: str) -> MoveRecord:
    _expect(rec, dict, loc, "object")
    kind = _key(rec, "kind", loc)
    if kind not in MOVE_KINDS:
        raise ParseError(f"unknown move kind {kind!r}; expected one of {list(MOVE_KINDS)}", f"{loc}.kind")
    args: dict = {}
    if kind == "slide":
        args = {"i": _circle_ref(rec, "i", loc), "j": _circle_ref(rec, "j", loc),
                "sign": _int_arg(rec, "sign", loc, 1),
                "conjugator": _raw_word(rec, "conjugator", loc)}
        if args["sign"] not in (1, -1):
            raise ParseError("sign must be +1 or -1", f"{loc}.sign")
    elif kind in ("swap", "blowdown"):
        args = {"i": _circle_ref(rec, "i", loc)}
    elif kind == "destabilize":
        args = {"i": _circle_ref(rec, "i", loc), "j": _circle_ref(rec, "j", loc)}
    elif kind == "stabilize":
        args = {"framing": _int_arg(rec, "framing", loc, 0)}
    elif kind == "blowup":
        args = {"sign": _int_arg(rec, "sign", loc, 1)}
        if args["sign"] not in (1, -1):
            raise ParseError("sign must be +1 or -1", f"{loc}.sign")
    elif kind == "tietze":
        move = _key(rec, "move", loc)
        if move not in ("T1", "T2", "T3", "T4"):
            raise ParseError(f"unknown Tietze move {move!r}", f"{loc}.move")
        args = {"move": move}
        if move == "T1":
            args.update(i=_int_arg(rec, "i", loc), j=_int_arg(rec, "j", loc),
                        sign=_int_arg(rec, "sign", loc, 1),
                        conjugator=_raw_word(rec, "conjugator", loc))
        elif move == "T2":
            args.update(i=_int_arg(rec, "i", loc),
                        invert=_expect(_key(rec, "invert", loc, False), bool, f"{loc}.invert", "boolean"),
                        conjugator=_raw_word(rec, "conjugator", loc))
        elif move == "T3":
            name = _key(rec, "name", loc, None)
            if name is not None:
                _expect(name, str, f"{loc}.name", "string")
            args.update(name=name, word=_raw_word(rec, "word", loc))
        else:
            g = _key(rec, "generator", loc)
            if not isinstance(g, (str, int)) or isinstance(g, bool):
                raise ParseError("expected generator name or index", f"{loc}.generator")
            args.update(generator=g)
    return MoveRecord(kind, args)


def parse_script(text: str) -> list[MoveRecord]:
    data = loads_json(text)
    if isinstance(data, dict):
        version = _key(data, "format_version", "$", FORMAT_VERSION)
        if version != FORMAT_VERSION:
            raise ParseError(f"unsupported format_version {version!r}", "$.format_version")
        moves, loc = _key(data, "moves", "$"), "$.moves"
    else:
        moves, loc = data, "$"
    _expect(moves, list, loc, "list of moves")
    return [parse_move_record(m, f"{loc}[{k}]") for k, m in enumerate(moves)]


def script_to_json(records: Sequence[MoveRecord]) -> dict:
    return {"format_version": FORMAT_VERSION,
            "moves": [{"kind": r.kind, **r.args} for r in records]}


def resolve_word(raw, names: Sequence[str]) -> Word:
    if isinstance(raw, str):
        return W.parse_word(raw, names)
    return word_from_json(raw, names, "word")


def tietze_from_record(args: dict, names: Sequence[str]) -> TietzeMove:
    move = args["move"]
    if move == "T1":
        return TietzeMove("T1", i=args["i"], j=args["j"], sign=args["sign"],
                          conjugator=resolve_word(args["conjugator"], names))
    if move == "T2":
        return TietzeMove("T2", i=args["i"], invert=args["invert"],
                          conjugator=resolve_word(args["conjugator"], names))
    if move == "T3":
        return TietzeMove("T3", word=resolve_word(args["word"], names), name=args["name"])
    g = args["generator"]
    if isinstance(g, str):
        if g not in names:
            raise ParseError(f"unknown generator {g!r}", "generator")
        g = list(names).index(g)
    return TietzeMove("T4", generator=g)


def tietze_to_record(move: TietzeMove, names: Sequence[str]) -> MoveRecord:
    d = move.to_json(names)
    d["move"] = d.pop("kind")
    return MoveRecord("tietze", d)
