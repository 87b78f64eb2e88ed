"""Command-line interface.

Exit codes:
    0  success
    1  a check failed (check-cacime, or an invariant violation under ``moves --check``)
    2  usage error
    3  parse or validation error
    4  refused: geometric linking data needed but the link is algebraic-only
    5  invalid move in a script
    6  resource limit exceeded
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from pathlib import Path

from . import bundles as B
from . import kirby as K
from . import manifold_file as MF
from .errors import DomainError, HandleCalcError, InvalidSpecError, InvalidWordError, RefusedError, ResourceLimitError
from .finite import named_group
from .homcount import BACKEND, count_homs
from .moves import MoveFailure, run_script
from .presentation import random_tietze_move, tietze_apply

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE, EXIT_REFUSED, EXIT_MOVE, EXIT_RESOURCE = range(7)

OUTPUT_DIR_ENV = "HANDLECALC_OUTPUT_DIR"

TARGETS = ("surface", "sigma2xT2", "E", "Eprime", "E0", "cacime")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# --- library-level command implementations ----------------------------------------

def build_target(target: str, genus: int = 2, gluing_word: str | None = None) -> MF.ManifoldFile:
    """Build one of the named spaces as a :class:`ManifoldFile`."""
    if target not in TARGETS:
        raise CliError(EXIT_USAGE, f"unknown target {target!r}; choose from {', '.join(TARGETS)}")
    try:
        if target == "surface":
            h, link = B.surface_times_disk(genus)
            return MF.ManifoldFile(h, link, {"builder": "surface", "params": {"genus": genus}})
        if target in ("sigma2xT2", "E"):
            h = B.build_E()
        elif target == "Eprime":
            h = B.build_E_prime()
        elif target == "E0":
            h = B.puncture_fiber(B.build_E())
        else:
            names = B.build_cacime().presentation.generator_names
            u = MF.resolve_word(gluing_word, names) if gluing_word else ()
            h = B.build_cacime(u=u)
            params = {"gluing_map": "identity", "gluing_word": gluing_word or "1"}
            return MF.ManifoldFile(h, K.companion_link(h), {"builder": target, "params": params})
    except (DomainError, InvalidSpecError, InvalidWordError) as exc:
        raise CliError(EXIT_PARSE, f"invalid parameters: {exc}") from None
    return MF.ManifoldFile(h, K.companion_link(h), {"builder": target, "params": {}})


def invariant_report(mf: MF.ManifoldFile, sigma_hint: int | None = None,
                     require_boundary: bool = False) -> dict:
    h, L = mf.handlebody, mf.framed_link
    h1 = K.h1_total(h)
    report = {
        "builder": mf.provenance.get("builder"),
        "generators": h.generator_count,
        "relators": h.relator_count,
        "n3": h.n3,
        "n4": h.n4,
        "closed": h.closed,
        "chi": K.euler_characteristic(h),
        "h1": h1.to_json(),
    }
    geometric = L is not None and not L.algebraic_only
    if require_boundary and not geometric:
        why = ("the file has no framed link" if L is None else
               "the framed link is algebraic-only: its dotted/dotted and 2-handle/2-handle "
               "linking numbers are builder defaults, not diagram data")
        raise CliError(EXIT_REFUSED, f"boundary H1 refused: {why}")
    if h.closed:
        r = K.closed_invariants(h, sigma_hint)
        report["b2"] = r.b2
        if sigma_hint is not None:
            report["sigma"], report["sigma_source"] = r.sigma, "hint"
        elif geometric:
            report["sigma"], report["sigma_source"] = K.link_signature(L), "intersection_form"
        else:
            report["sigma"], report["sigma_source"] = "unknown", None
    else:
        report["b2"] = None
        if geometric:
            report["sigma"], report["sigma_source"] = K.link_signature(L), "intersection_form"
        elif sigma_hint is not None:
            report["sigma"], report["sigma_source"] = int(sigma_hint), "hint"
        else:
            report["sigma"], report["sigma_source"] = "unknown", None
    if geometric:
        report["boundary_h1"] = K.h1_boundary(L).to_json()
        report["boundary_status"] = "computed"
    else:
        report["boundary_h1"] = None
        report["boundary_status"] = "no_link" if L is None else "algebraic_only"
    return report


def _group_text(d: dict | None) -> str:
    if d is None:
        return "n/a"
    parts = []
    if d["free_rank"]:
        parts.append("Z" if d["free_rank"] == 1 else f"Z^{d['free_rank']}")
    parts.extend(f"Z/{t}" for t in d["torsion"])
    return " + ".join(parts) or "0"


def format_report_text(r: dict) -> str:
    lines = [
        f"builder: {r['builder']}",
        f"handles: {r['generators']} one, {r['relators']} two, {r['n3']} three, {r['n4']} four"
        + (" (closed)" if r["closed"] else ""),
        f"euler characteristic: {r['chi']}",
        f"H1: {_group_text(r['h1'])}",
    ]
    if r["b2"] is not None:
        lines.append(f"b2: {r['b2']}")
    src = f" ({r['sigma_source']})" if r["sigma_source"] else ""
    lines.append(f"signature: {r['sigma']}{src}")
    if r["boundary_status"] == "computed":
        lines.append(f"boundary H1: {_group_text(r['boundary_h1'])}")
    else:
        lines.append(f"boundary H1: not computed ({r['boundary_status']})")
    return "\n".join(lines) + "\n"


def tietze_variants(p, count: int, seed: int, kinds=("T1", "T2"), length: int = 10):
    """``count`` presentations, each obtained by up to ``length`` random moves."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        q = p
        for _ in range(rng.randint(1, length)):
            move = random_tietze_move(q, rng, kinds)
            if move is not None:
                q = tietze_apply(q, move)
        out.append(q)
    return out


def hom_report(mf: MF.ManifoldFile, group: str, cap: int, variants: int = 0, seed: int = 0,
               variant_moves=("T1", "T2")) -> dict:
    G = named_group(group)
    p = mf.handlebody.presentation
    counts = [count_homs(p, G, cap)]
    for q in tietze_variants(p, variants, seed, variant_moves):
        counts.append(count_homs(q, G, cap))
    return {"group": group.lower(), "order": G.order, "generators": p.generator_count,
            "count": counts[0], "variant_counts": counts[1:], "seed": seed if variants else None,
            "backend": BACKEND}


def check_cacime(gluing_word: str | None = None, expect_chi: int = 4, expect_b1: int = 6,
                 expect_b2: int = 14) -> list[tuple[str, bool, str]]:
    """The end-to-end certification; one ``(name, passed, detail)`` per check."""
    results = []
    mf = build_target("cacime", gluing_word=gluing_word)
    h = mf.handlebody
    h1 = K.h1_total(h)
    results.append(("H1 free abelian of rank %d" % expect_b1,
                    h1.free_rank == expect_b1 and not h1.torsion, f"H1 = {h1}"))
    chi = K.euler_characteristic(h)
    results.append(("euler characteristic %d" % expect_chi, chi == expect_chi, f"chi = {chi}"))
    mult = B.multiplicativity_check(8, 0, 2, 4, 0)
    results.append(("free double cover: chi 8 -> 4, sigma 0 -> 0", mult,
                    "chi(S2 x S3) = (-2)(-4) = 8"))
    r = K.closed_invariants(h, 0 if mult else None)
    results.append(("b2 = %d" % expect_b2, r.b2 == expect_b2, f"b2 = {r.b2}"))
    chern = B.ChernData(q=3, p_g=3, K2=8, c2=r.chi, sigma=0, b1=r.b1, b2=r.b2)
    results.append(("Noether, signature and Betti identities (q = p_g = 3, K^2 = 8)",
                    B.characteristic_identities_check(chern), repr(chern)))
    results.append(("homology of #7(S2 x S2) # 6(S1 x S3)", B.homology_model_check(r, 7, 6),
                    f"chi={r.chi} b1={r.b1} b2={r.b2} sigma={r.sigma}"))
    z2 = count_homs(h.presentation, named_group("z2"))
    results.append(("|Hom(pi1, Z/2)| = 2^b1", z2 == 2 ** r.b1, f"count = {z2}"))
    return results


# --- argument handling -----------------------------------------------------------

def _out_path(out: str) -> Path:
    path = Path(out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _emit(text: str, out: str | None):
    if out:
        path = _out_path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        sys.stdout.write(text)


def _load(path: str) -> MF.ManifoldFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"{path}: cannot read ({exc.strerror})") from None
    try:
        return MF.parse(text)
    except MF.ParseError as exc:
        raise CliError(EXIT_PARSE, f"{path}: parse error at {exc}") from None


def cmd_build(args) -> int:
    mf = build_target(args.target, genus=args.genus, gluing_word=args.gluing_word)
    _emit(MF.serialize(mf), args.out)
    return EXIT_OK


def cmd_invariants(args) -> int:
    mf = _load(args.file)
    r = invariant_report(mf, args.sigma_hint, args.boundary)
    _emit(MF.dumps(r) if args.format == "json" else format_report_text(r), None)
    return EXIT_OK


def cmd_moves(args) -> int:
    mf = _load(args.file)
    try:
        records = MF.parse_script(Path(args.script).read_text())
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"{args.script}: cannot read ({exc.strerror})") from None
    except MF.ParseError as exc:
        raise CliError(EXIT_PARSE, f"{args.script}: parse error at {exc}") from None
    try:
        result = run_script(mf, records, check=args.check)
    except MoveFailure as exc:
        code = EXIT_FAIL if exc.violation else EXIT_REFUSED if exc.refused else EXIT_MOVE
        raise CliError(code, str(exc)) from None
    _emit(MF.serialize(result), args.out)
    return EXIT_OK


def cmd_homs(args) -> int:
    mf = _load(args.file)
    kinds = tuple(k.strip() for k in args.variant_moves.split(",") if k.strip())
    if any(k not in ("T1", "T2", "T3", "T4") for k in kinds):
        raise CliError(EXIT_USAGE, f"--variant-moves takes T1..T4, got {args.variant_moves!r}")
    try:
        r = hom_report(mf, args.group, args.cap, args.variants, args.seed, kinds)
    except ResourceLimitError as exc:
        raise CliError(EXIT_RESOURCE, f"{exc}; rerun with --cap {exc.required} or more") from None
    if args.format == "json":
        _emit(MF.dumps(r), None)
    else:
        line = f"|Hom(pi1, {args.group})| = {r['count']}\n"
        if r["variant_counts"]:
            line += f"Tietze variants (seed {args.seed}): {r['variant_counts']}\n"
        _emit(line, None)
    return EXIT_OK


def cmd_check_cacime(args) -> int:
    results = check_cacime(args.gluing_word, args.expect_chi, args.expect_b1, args.expect_b2)
    failed = [name for name, ok, _ in results if not ok]
    if args.format == "json":
        _emit(MF.dumps({"passed": not failed,
                        "checks": [{"name": n, "passed": ok, "detail": d} for n, ok, d in results]}),
              None)
    else:
        text = "".join(f"{'PASS' if ok else 'FAIL'}  {n}  [{d}]\n" for n, ok, d in results)
        text += "all checks passed\n" if not failed else f"failed: {', '.join(failed)}\n"
        _emit(text, None)
    return EXIT_FAIL if failed else EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="handlecalc", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a named space and write its manifold file")
    p.add_argument("target", choices=TARGETS)
    p.add_argument("--genus", type=int, default=2, help="surface genus (target 'surface')")
    p.add_argument("--gluing-word", help="gluing word u for 'cacime', e.g. '[x1,y1]'")
    p.add_argument("--out", help=f"output file (relative paths honour ${OUTPUT_DIR_ENV})")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("invariants", help="report invariants of a manifold file")
    p.add_argument("file")
    p.add_argument("--sigma-hint", type=int, help="signature supplied externally (e.g. by multiplicativity)")
    p.add_argument("--boundary", action="store_true", help="require boundary H1 (exit 4 if unavailable)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("moves", help="apply a move script")
    p.add_argument("file")
    p.add_argument("script")
    p.add_argument("--check", action="store_true", help="verify preserved invariants after every step")
    p.add_argument("--out")
    p.set_defaults(func=cmd_moves)

    p = sub.add_parser("homs", help="count homomorphisms to a small finite group")
    p.add_argument("file")
    p.add_argument("--group", choices=("z2", "z3", "s3"), default="z2")
    p.add_argument("--cap", type=int, default=10 ** 8, help="maximum |G|^generators to search")
    p.add_argument("--variants", type=int, default=0, help="also count on N random Tietze variants")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--variant-moves", default="T1,T2")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_homs)

    p = sub.add_parser("check-cacime", help="end-to-end certification of the CaCiMe build")
    p.add_argument("--gluing-word")
    p.add_argument("--expect-chi", type=int, default=4)
    p.add_argument("--expect-b1", type=int, default=6)
    p.add_argument("--expect-b2", type=int, default=14)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_check_cacime)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"handlecalc: {exc}", file=sys.stderr)
        return exc.code
    except RefusedError as exc:
        print(f"handlecalc: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except HandleCalcError as exc:
        print(f"handlecalc: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
