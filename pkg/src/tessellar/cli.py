"""
Batch front end. Every subcommand prints a JSON report (or writes it to
--out) and exits 0 on Finished/OrbifoldDetected, 2 on BudgetExceeded,
64 on usage errors and 70 on internal errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .complex import ComplexError, cusp_count, is_manifold, solid_count
from .congruence import Variant, build_congruence
from .export import (
    Report,
    UnsupportedDimension,
    build_chessboard,
    chessboard_counts,
    read_snappea,
    write_perm_generators,
    write_presentation,
    write_report,
    write_snappea,
)
from .homology import RankDeficit, cuspidal_h1, h1, is_homology_link_complement
from .lattice import Kind, QuadInt, canonicalize, norm_sq
from .nanotube import TessType
from .universal import (
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_MAX_SIMPLICES,
    NotFreeAction,
    Status,
    boundary,
    build_universal,
    cluster_report,
    quotient_by_words,
    relator_holds,
    relators,
    symmetry_generators,
    verify_cusp_modulus,
)

EXIT_OK = 0
EXIT_BUDGET = 2
EXIT_USAGE = 64
EXIT_INTERNAL = 70

_TYPE_FOR_D = {-3: TessType(3, 3, 6), -4: TessType(3, 4, 4)}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunSpec:
    subcommand: str
    t: TessType | None = None
    z: QuadInt | None = None
    variant: Variant | None = None
    max_simplices: int = DEFAULT_MAX_SIMPLICES
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    out: Path | None = None
    snappea: Path | None = None
    perms: Path | None = None
    presentation: Path | None = None
    verify: bool = False
    homology: bool = False
    clusters: bool = False
    words: list = field(default_factory=list)
    input: Path | None = None


def threads() -> int:
    """Parallelism cap from TESSELLAR_THREADS. The builders are sequential, so this only validates."""
    raw = os.environ.get("TESSELLAR_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"TESSELLAR_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"TESSELLAR_THREADS must be a positive integer, got {raw!r}")
    return n


def parse_z(text: str, kind: Kind) -> QuadInt:
    try:
        z = QuadInt.parse(text, kind)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if z.is_zero():
        raise UsageError("z must be non-zero")
    return canonicalize(z)


def _resolve(args) -> RunSpec:
    spec = RunSpec(args.command)
    t = None
    if getattr(args, "type", None):
        try:
            t = TessType.parse(args.type)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    d = getattr(args, "D", None)
    if d is not None:
        if d not in _TYPE_FOR_D:
            raise UsageError(f"--D must be -3 or -4, got {d}")
        if t is not None and t != _TYPE_FOR_D[d]:
            raise UsageError(f"--type {t} does not match --D {d}")
        t = _TYPE_FOR_D[d]
    spec.t = t
    if getattr(args, "z", None) is not None:
        if t is None:
            raise UsageError("--z needs --type or --D")
        spec.z = parse_z(args.z, t.kind)
    if getattr(args, "variant", None):
        spec.variant = Variant(args.variant)
    for name in ("max_simplices", "max_iterations"):
        v = getattr(args, name, None)
        if v is not None:
            if v <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
            setattr(spec, name, v)
    for name in ("out", "snappea", "perms", "presentation", "input"):
        v = getattr(args, name, None)
        if v:
            setattr(spec, name, Path(v))
    spec.verify = bool(getattr(args, "verify", False))
    spec.homology = bool(getattr(args, "homology", False))
    spec.clusters = bool(getattr(args, "clusters", False))
    spec.words = list(getattr(args, "word", None) or [])
    return spec


def _require(spec: RunSpec, *names: str) -> None:
    for name in names:
        if getattr(spec, name) is None:
            flag = {"t": "--type", "z": "--z", "variant": "--variant", "input": "--input"}[name]
            raise UsageError(f"{spec.subcommand} needs {flag}")


# -- shared pieces ---------------------------------------------------------------------------


def _emit(spec: RunSpec, report: Report | dict) -> None:
    text = write_report(report)
    if spec.out:
        spec.out.write_text(text)
    else:
        sys.stdout.write(text)


def _base_report(state, manifold: bool | None) -> Report:
    rep = Report(
        tess_type=str(state.t),
        z=str(state.z),
        status=state.status.value,
        simplices=len(state.complex),
        growth=list(state.growth),
    )
    if state.status is Status.FINISHED:
        rep.is_manifold = manifold
        if manifold:
            rep.solids = solid_count(state.complex, state.t)
            rep.cusps = cusp_count(state.complex)
    elif state.status is Status.ORBIFOLD:
        rep.is_manifold = False
    if state.reason:
        rep.extra["reason"] = state.reason
    return rep


def _add_homology(rep: Report, c) -> None:
    h = h1(c)
    rep.h1 = h.as_dict()
    rep.extra["h1_text"] = str(h)
    try:
        rep.cuspidal_h1 = cuspidal_h1(c, h).as_dict()
    except RankDeficit:
        rep.cuspidal_h1 = None
    rep.homology_link_complement = is_homology_link_complement(c, h)


def _verify(c, t: TessType, z: QuadInt, manifold: bool, regular: bool = True) -> dict:
    """Audit plus invariant checks; raises ComplexError on failure."""
    c.audit()
    checks = {"audit": True}
    if manifold:
        checks["cusp_modulus"] = verify_cusp_modulus(c, z, t)
        solids, cusps = solid_count(c, t), cusp_count(c)
        checks["counting_identity"] = (
            solids * t.simplices_per_solid == cusps * 2 * t.r * norm_sq(z)
        )
        if regular:
            gens = symmetry_generators(c)
            checks["relators"] = all(relator_holds(gens, w) for w in relators(t, z))
    failed = [k for k, v in checks.items() if not v]
    if failed:
        raise ComplexError(f"verification failed: {', '.join(failed)}")
    return checks


def _artifacts(spec: RunSpec, c, name: str, manifold: bool) -> None:
    if spec.presentation:
        spec.presentation.write_text(write_presentation(spec.t, spec.z))
    if spec.snappea:
        if not manifold:
            raise UsageError("--snappea needs a finished manifold")
        spec.snappea.write_text(write_snappea(c, name))
    if spec.perms:
        if not c.is_closed():
            raise UsageError("--perms needs a finished complex")
        spec.perms.write_text(write_perm_generators(c))


def _exit_for(status: Status) -> int:
    return EXIT_BUDGET if status is Status.BUDGET_EXCEEDED else EXIT_OK


# -- subcommands -------------------------------------------------------------------------------


def cmd_universal(spec: RunSpec) -> int:
    _require(spec, "t", "z")
    cluster_log = []

    def record(state, first_new=None):
        if not state.complex.is_closed():
            surf = boundary(state.complex, state.t)
            cluster_log.append({"iteration": state.iteration,
                                "clusters": cluster_report(surf, state.t.q)})

    hook = record if spec.clusters else None
    state = build_universal(spec.t, spec.z, spec.max_simplices, spec.max_iterations, hook)
    c = state.complex
    manifold = state.status is Status.FINISHED and is_manifold(c, state.t)
    rep = _base_report(state, manifold)
    rep.clusters = cluster_log
    if spec.homology and manifold:
        _add_homology(rep, c)
    if spec.verify and state.status is Status.FINISHED:
        rep.extra["verified"] = _verify(c, state.t, state.z, manifold)
    _artifacts(spec, c, f"N_{spec.t.p}{spec.t.q}{spec.t.r}_{spec.z}", manifold)
    _emit(spec, rep)
    return _exit_for(state.status)


def cmd_congruence(spec: RunSpec) -> int:
    _require(spec, "t", "z", "variant")
    state = build_congruence(spec.t, spec.z, spec.variant, spec.max_simplices, spec.max_iterations)
    c = state.complex
    manifold = state.status is Status.FINISHED and is_manifold(c, state.t)
    rep = _base_report(state, manifold)
    rep.variant = spec.variant.value
    if spec.homology and manifold:
        _add_homology(rep, c)
    if spec.verify and state.status is Status.FINISHED:
        rep.extra["verified"] = _verify(c, state.t, state.z, manifold, regular=False)
    _artifacts(spec, c, f"{spec.variant.value}_{spec.t.kind.discriminant}_{spec.z}", manifold)
    _emit(spec, rep)
    return _exit_for(state.status)


def cmd_homology(spec: RunSpec) -> int:
    if spec.input:
        c = read_snappea(spec.input.read_text())
        h = h1(c)
        rep = {
            "input": spec.input.name,
            "simplices": len(c),
            "cusps": cusp_count(c),
            "h1": h.as_dict(),
            "h1_text": str(h),
            "homology_link_complement": is_homology_link_complement(c, h),
        }
        try:
            rep["cuspidal_h1"] = cuspidal_h1(c, h).as_dict()
        except RankDeficit:
            pass
        _emit(spec, rep)
        return EXIT_OK
    _require(spec, "t", "z")
    if spec.variant:
        state = build_congruence(spec.t, spec.z, spec.variant, spec.max_simplices, spec.max_iterations)
    else:
        state = build_universal(spec.t, spec.z, spec.max_simplices, spec.max_iterations)
    c = state.complex
    manifold = state.status is Status.FINISHED and is_manifold(c, state.t)
    rep = _base_report(state, manifold)
    if spec.variant:
        rep.variant = spec.variant.value
    if manifold:
        _add_homology(rep, c)
    _emit(spec, rep)
    return _exit_for(state.status)


def cmd_export(spec: RunSpec) -> int:
    _require(spec, "t", "z")
    if not (spec.snappea or spec.perms or spec.presentation):
        raise UsageError("export needs at least one of --snappea, --perms, --presentation")
    if spec.snappea or spec.perms:
        if spec.variant:
            state = build_congruence(spec.t, spec.z, spec.variant, spec.max_simplices,
                                     spec.max_iterations)
        else:
            state = build_universal(spec.t, spec.z, spec.max_simplices, spec.max_iterations)
        c = state.complex
        manifold = state.status is Status.FINISHED and is_manifold(c, state.t)
        rep = _base_report(state, manifold)
        if state.status is not Status.FINISHED:
            _emit(spec, rep)
            return _exit_for(state.status)
    else:
        c, manifold = None, False
        rep = {"tess_type": str(spec.t), "z": str(spec.z)}
    _artifacts(spec, c, f"N_{spec.t.p}{spec.t.q}{spec.t.r}_{spec.z}", manifold)
    _emit(spec, rep)
    return EXIT_OK


def cmd_chessboard(spec: RunSpec, m: int, n: int, check_iso: bool) -> int:
    if m < 1 or n < 1:
        raise UsageError("board dimensions must be positive")
    counts = chessboard_counts(m, n)
    lines = [f"counts: {' '.join(map(str, counts))}", f"top simplices: {counts[-1]}"]
    if check_iso:
        from .complex import are_isomorphic

        try:
            cb = build_chessboard(m, n)
        except UnsupportedDimension as exc:
            raise UsageError(str(exc)) from None
        ref = build_universal(TessType(3, 3, 6), QuadInt(2, 2, Kind.EISENSTEIN))
        iso = are_isomorphic(cb, ref.complex, label_map=(3, 2, 1, 0))
        lines.append(f"subdivision simplices: {len(cb)}")
        lines.append(f"cusps: {cusp_count(cb)}")
        lines.append(f"isomorphic: {'true' if iso else 'false'}")
    text = "\n".join(lines) + "\n"
    if spec.out:
        spec.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_quotient(spec: RunSpec) -> int:
    _require(spec, "t", "z")
    if not spec.words:
        raise UsageError("quotient needs at least one --word")
    state = build_universal(spec.t, spec.z, spec.max_simplices, spec.max_iterations)
    if state.status is not Status.FINISHED or not is_manifold(state.complex, state.t):
        _emit(spec, _base_report(state, False))
        return _exit_for(state.status)
    try:
        q = quotient_by_words(state.complex, spec.words, state.t)
    except NotFreeAction as exc:
        raise UsageError(f"not a free action: {exc}") from None
    rep = Report(
        tess_type=str(spec.t), z=str(spec.z), status=Status.FINISHED.value,
        simplices=len(q), growth=list(state.growth), is_manifold=True,
        solids=solid_count(q, spec.t), cusps=cusp_count(q),
    )
    rep.extra["words"] = spec.words
    rep.extra["cover_degree"] = len(state.complex) // len(q)
    if spec.homology:
        _add_homology(rep, q)
    if spec.verify:
        rep.extra["verified"] = _verify(q, spec.t, spec.z, True, regular=False)
    _artifacts(spec, q, f"quotient_{spec.t.p}{spec.t.q}{spec.t.r}_{spec.z}", True)
    _emit(spec, rep)
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tessellar", description="Regular tessellations of cusped hyperbolic 3-manifolds.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, variant=False, words=False):
        p.add_argument("--type", help="p,q,r")
        p.add_argument("--D", type=int, help="discriminant, -3 or -4")
        p.add_argument("--z", help='cusp modulus "a", "a+bi" or "a+bz" (z is zeta)')
        if variant:
            p.add_argument("--variant", choices=[v.value for v in Variant], help="label group; selects a congruence build")
        p.add_argument("--max-simplices", type=int, help="stop once the complex is larger")
        p.add_argument("--max-iterations", type=int, help="stop after this many growth steps")
        p.add_argument("--out", help="JSON report path, default stdout")
        p.add_argument("--snappea", help="write a SnapPea triangulation here")
        p.add_argument("--perms", help="write symmetry generators in cycle notation here")
        p.add_argument("--presentation", help="write the group presentation here")
        p.add_argument("--verify", action="store_true", help="run the consistency checks")
        p.add_argument("--homology", action="store_true", help="add H1 to the report")
        if words:
            p.add_argument("--word", action="append", help="deck transformation word, repeatable")

    p = sub.add_parser("universal", help="build a universal regular tessellation")
    common(p)
    p.add_argument("--clusters", action="store_true", help="record boundary clusters per iteration")
    common(sub.add_parser("congruence", help="build a principal congruence manifold"), variant=True)
    p = sub.add_parser("homology", help="H1 of a built or imported manifold")
    common(p, variant=True)
    p.add_argument("--input", help="SnapPea file written by this tool")
    common(sub.add_parser("export", help="write SnapPea, permutation or presentation files"),
           variant=True)
    p = sub.add_parser("chessboard", help="chessboard complex counts and isomorphism check")
    p.add_argument("m", type=int, help="rows")
    p.add_argument("n", type=int, help="columns")
    p.add_argument("--check-iso", action="store_true", help="compare the 4x5 subdivision with N^{3,3,6}_{2+2z}")
    p.add_argument("--out", help="JSON report path")
    common(sub.add_parser("quotient", help="quotient a universal tessellation by deck words"),
           words=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        threads()
        spec = _resolve(args)
        if args.command == "chessboard":
            return cmd_chessboard(spec, args.m, args.n, args.check_iso)
        handler = {
            "universal": cmd_universal,
            "congruence": cmd_congruence,
            "homology": cmd_homology,
            "export": cmd_export,
            "quotient": cmd_quotient,
        }[args.command]
        return handler(spec)
    except UsageError as exc:
        print(f"tessellar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"tessellar: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
