"""Command-line entry point: toric-interp <command> [options]."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .classify import default_catalog, enumerate_classes, match_class
from .degeneration import (
    BlockLibrary,
    DegenCertificate,
    Region,
    build_p1xp1,
    build_p2,
    conclude_dimension,
    search_block,
    verify_certificate,
)
from .errors import MalformedCertificate, NotCovered, NotFound, NotInCatalog, ToricError
from .fatpoints import SystemSpec, generic_dim_oracle, is_empty_after_triple, symbolic_det, triple_point_matrix, vdim_plane, vdim_polygon
from .lattice import parse_polygon_literal, triangle

OK, MALFORMED, NEGATIVE, IO_ERROR = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a,b got {text!r}")
    return a, b


def _mults(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("multiplicities must be positive integers")
    return vals


def _polygon(text: str):
    try:
        return parse_polygon_literal(text)
    except (ToricError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=42)

    p = _Parser(prog="toric-interp", description="Triple-point interpolation by toric degenerations.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("classify", parents=[common], help="classify convex lattice polygons by enclosed point count")
    s.add_argument("--points", type=int, default=6)
    s.add_argument("--box", type=int, default=8)

    s = sub.add_parser("triple-test", parents=[common], help="does a general triple point empty the system of a polygon")
    s.add_argument("--polygon", type=_polygon, required=True)

    s = sub.add_parser("vdim", parents=[common], help="virtual and expected dimension")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--degree", type=int)
    g.add_argument("--polygon", type=_polygon)
    s.add_argument("--mults", type=_mults, required=True)

    s = sub.add_parser("oracle", parents=[common], help="dimension by exact rank at random points")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--degree", type=int)
    g.add_argument("--polygon", type=_polygon)
    s.add_argument("--mults", type=_mults, required=True)
    s.add_argument("--trials", type=int, default=3)

    s = sub.add_parser("search-block", parents=[common], help="search a region for a certificate")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--rect", type=_pair, metavar="A,B")
    g.add_argument("--triangle", type=int, metavar="D")
    s.add_argument("--special", type=int, required=True)
    s.add_argument("--budget", type=int, default=10_000_000)
    s.add_argument("-o", "--output", type=Path)

    s = sub.add_parser("build", parents=[common], help="assemble a certificate from the block recipes")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--p2", action="store_true")
    g.add_argument("--p1xp1", type=_pair, metavar="A,B")
    s.add_argument("--degree", type=int)
    s.add_argument("--budget", type=int, default=10_000_000)
    s.add_argument("--golden", type=Path, help="reuse verified base blocks from this directory")
    s.add_argument("-o", "--output", type=Path)

    s = sub.add_parser("verify", parents=[common], help="verify a certificate file")
    s.add_argument("certificate", type=Path)

    s = sub.add_parser("render", parents=[common], help="draw a certificate as SVG")
    s.add_argument("certificate", type=Path)
    s.add_argument("-o", "--output", type=Path, required=True)

    s = sub.add_parser("regen-golden", parents=[common], help="regenerate the golden certificates")
    s.add_argument("--out", type=Path, default=Path("golden"))
    s.add_argument("--budget", type=int, default=10_000_000)
    return p


def _dumps(data) -> str:
    return json.dumps(data, separators=(",", ":"))


def _emit(args, data: dict, human: str | None) -> None:
    """JSON with --json; otherwise the human line.  Queries pass human=None
    and always answer in JSON."""
    if args.json or human is None:
        print(_dumps(data))
    else:
        print(human)


def _read_certificate(path: Path) -> DegenCertificate:
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return DegenCertificate.loads(text)


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _cmd_classify(args) -> int:
    if args.points < 1 or args.box < 1:
        raise UsageError("--points and --box must be positive")
    cat = enumerate_classes(args.points, args.box)
    _emit(args, cat.to_json(), None)
    return OK


def _cmd_triple_test(args) -> int:
    P = args.polygon
    det_zero = symbolic_det(triple_point_matrix(P)).is_zero()
    empty = is_empty_after_triple(P)
    data = {"empty": empty, "det_is_zero": det_zero}
    try:
        data["class"] = match_class(P, default_catalog()).id
    except NotInCatalog:
        pass
    _emit(args, data, None)
    return OK if empty else NEGATIVE


def _cmd_vdim(args) -> int:
    if args.degree is not None:
        if args.degree < 0:
            raise UsageError("--degree must be >= 0")
        v, e = vdim_plane(args.degree, args.mults)
    else:
        v, e = vdim_polygon(args.polygon, args.mults)
    _emit(args, {"virtual": v, "expected": e}, None)
    return OK


def _cmd_oracle(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    P = triangle(args.degree) if args.degree is not None else args.polygon
    if args.degree is not None and args.degree < 1:
        raise UsageError("--degree must be >= 1")
    dim = generic_dim_oracle(P, args.mults, trials=args.trials, seed=args.seed)
    _emit(args, {"dim": dim}, None)
    return OK


def _report_lines(cert: DegenCertificate, report) -> str:
    name = cert.meta.get("name", cert.region.label)
    status = "verified" if report.valid else "INVALID: " + ", ".join(report.failures)
    return f"{name} on {cert.region.label}: {status}; r={report.special_count} e={report.uncovered_count} dim <= {report.dim_upper_bound} ({report.regularity})"


def _certificate_output(args, cert: DegenCertificate) -> int:
    report = verify_certificate(cert)
    if args.output:
        _write(args.output, cert.dumps())
    data = {"report": report.to_json(), "meta": cert.meta}
    if not args.output:
        data["certificate"] = cert.to_json()
    human = _report_lines(cert, report) + (f"\nwritten to {args.output}" if args.output else "")
    _emit(args, data, human)
    return OK if report.valid else NEGATIVE


def _cmd_search_block(args) -> int:
    if args.special < 0 or args.budget < 1:
        raise UsageError("--special must be >= 0 and --budget >= 1")
    if args.rect is not None:
        a, b = args.rect
        if a < 1 or b < 1:
            raise UsageError("--rect needs positive sides")
        region = Region.rectangle(a, b)
    else:
        if args.triangle < 1:
            raise UsageError("--triangle must be >= 1")
        region = Region.triangle(args.triangle)
    try:
        cert = search_block(region, args.special, budget=args.budget)
    except NotFound as exc:
        _emit(args, {"found": False, "reason": str(exc), "stats": exc.stats}, f"not found: {exc}")
        return NEGATIVE
    return _certificate_output(args, cert)


def _cmd_build(args) -> int:
    lib = BlockLibrary(budget=args.budget, golden_dir=args.golden)
    try:
        if args.p2:
            if args.degree is None:
                raise UsageError("build --p2 needs --degree")
            cert = build_p2(args.degree, library=lib)
        else:
            cert = build_p1xp1(*args.p1xp1, library=lib)
    except (NotCovered, NotFound) as exc:
        _emit(args, {"built": False, "reason": str(exc)}, f"not built: {exc}")
        return NEGATIVE
    return _certificate_output(args, cert)


def _cmd_verify(args) -> int:
    cert = _read_certificate(args.certificate)
    report = verify_certificate(cert)
    data = report.to_json()
    human = [_report_lines(cert, report)]
    if report.valid:
        spec = SystemSpec((3,) * report.special_count, polygon=cert.region.polygon)
        conclusion = conclude_dimension(report, spec)
        data["conclusion"] = conclusion.to_json()
        human.append(str(conclusion))
    else:
        human.extend("  " + d for d in report.details)
    _emit(args, data, "\n".join(human))
    return OK if report.valid else NEGATIVE


def _cmd_render(args) -> int:
    from .render import render_certificate

    cert = _read_certificate(args.certificate)
    _write(args.output, render_certificate(cert))
    _emit(args, {"written": str(args.output), "marked": len(cert.marked), "uncovered": len(cert.uncovered)}, f"written to {args.output}")
    return OK


def _cmd_regen_golden(args) -> int:
    from .golden import regen_golden

    messages = []
    log = messages.append if args.json else print
    paths = regen_golden(args.out, budget=args.budget, log=log)
    if args.json:
        print(_dumps({"written": [p.name for p in paths], "log": messages}))
    return OK


COMMANDS = {
    "classify": _cmd_classify,
    "triple-test": _cmd_triple_test,
    "vdim": _cmd_vdim,
    "oracle": _cmd_oracle,
    "search-block": _cmd_search_block,
    "build": _cmd_build,
    "verify": _cmd_verify,
    "render": _cmd_render,
    "regen-golden": _cmd_regen_golden,
}


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return MALFORMED
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return MALFORMED
    except MalformedCertificate as exc:
        print(f"malformed certificate: {exc}", file=sys.stderr)
        return MALFORMED
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return IO_ERROR
    except ToricError as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return NEGATIVE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
