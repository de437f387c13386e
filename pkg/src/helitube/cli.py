"""Command-line interface.

Exit codes: 0 evaluated, 2 usage or input error, 3 a ``--require``-d verdict
is false, 4 numeric domain error (real length at or above Meyerhoff's
constant).
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__
from . import geometry as geo
from .certify import Certificate, ConditionResult, certify
from .errors import DomainError, OutOfMeyerhoffRange, SpectrumFormatError
from .mesh import HelicoidPatch, sample_helicoid, sample_tube_boundary, write_obj
from .spectrum import build_report, builtin_fixtures, certificate_to_obj, emit_report, parse_native, dump_json

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_REQUIRE = 3
EXIT_DOMAIN = 4


def _g(x) -> str:
    if x is None:
        return "-"
    return format(x, ".12g")


def _write(text: str) -> None:
    sys.stdout.write(text)


def _condition_lines(c: ConditionResult, depth: int = 0) -> list[str]:
    name = "  " * depth + c.condition_id.value
    lines = [f"{name:<30} {c.status:<14} {_g(c.lhs):>20} {_g(c.rhs):>20} {_g(c.margin):>20}"]
    for p in c.parts:
        lines += _condition_lines(p, depth + 1)
    return lines


def format_certificate(cert: Certificate) -> str:
    tube = cert.tube
    rows = [
        ("complex length", str(cert.input)),
        ("genus", str(cert.genus)),
        ("ratio |theta|/sqrt(ell)", _g(cert.input.ratio)),
        ("a = |theta|/ell", _g(cert.a_parameter)),
        ("helicoid unstable", str(cert.unstable_helicoid).lower()),
        ("kappa", _g(tube.kappa) if tube else "-"),
        ("tube radius r0", _g(tube.radius_r0) if tube else "-"),
        ("meridian disk area", _g(tube.meridian_disk_area) if tube else "-"),
        ("boundary area", _g(tube.boundary_area) if tube else "-"),
        ("annulus area", _g(cert.annulus_area)),
        ("theorem1_ok", str(cert.theorem1_ok).lower()),
        ("theorem2_ok", str(cert.theorem2_ok).lower()),
        ("area_comparison_ok", str(cert.area_comparison_ok).lower()),
        ("separation_ok", str(cert.separation_ok).lower()),
    ]
    out = [f"{k:<26} {v}" for k, v in rows]
    out.append("")
    out.append(f"{'condition':<30} {'status':<14} {'lhs':>20} {'rhs':>20} {'margin':>20}")
    for c in cert.conditions:
        out += _condition_lines(c)
    for key, text in cert.conclusions.items():
        out.append(f"conclusion[{key}]: {text}")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def cmd_check(args) -> int:
    cert = certify(geo.ComplexLength(args.ell, args.theta), args.genus)
    if args.format == "json":
        _write(dump_json(certificate_to_obj(cert)) + "\n")
    else:
        _write(format_certificate(cert))
    if args.require == "theorem1" and not cert.theorem1_ok:
        return EXIT_REQUIRE
    if args.require == "theorem2" and not cert.theorem2_ok:
        return EXIT_REQUIRE
    return EXIT_OK


def cmd_batch(args) -> int:
    if args.fixtures:
        records = builtin_fixtures()
    elif args.input is None:
        print("batch: one of --input or --fixtures is required", file=sys.stderr)
        return EXIT_USAGE
    else:
        if args.input == "-":
            data = sys.stdin.buffer.read()
        else:
            try:
                data = Path(args.input).read_bytes()
            except OSError as exc:
                print(f"batch: cannot read {args.input}: {exc.strerror}", file=sys.stderr)
                return EXIT_USAGE
        try:
            records = parse_native(data)
        except (SpectrumFormatError, DomainError) as exc:
            print(f"batch: {args.input}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    payload = emit_report(build_report(records), args.format)
    if args.out:
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    return EXIT_OK


def cmd_constants(args) -> int:
    k = geo.constants_table(args.genus)
    rows = [
        (f"eps_otal({k.genus})", k.eps_otal),
        ("eps0", k.eps0),
        ("eps1", k.eps1),
        ("eps2", k.eps2),
        ("ratio_threshold", k.ratio_threshold),
        ("mori_threshold", k.mori_threshold),
        ("b", k.b),
        (f"ratio_upper_bound({k.genus})", geo.ratio_upper_bound(k.genus)),
    ]
    _write("".join(f"{name:<24} {value:.12g}\n" for name, value in rows))
    return EXIT_OK


def cmd_mesh(args) -> int:
    cl = geo.ComplexLength(args.ell, args.theta)
    v_max = cl.ell if args.v_max is None else args.v_max
    if args.kind == "helicoid":
        mesh = sample_helicoid(HelicoidPatch.for_curve(cl, v_max, args.nu, args.nv))
        reference = geo.annulus_area(cl.ell, abs(cl.theta), geo.tube_radius(cl.ell)) * v_max / cl.ell
    else:
        mesh = sample_tube_boundary(cl, args.nu, args.nv, v_max)
        reference = geo.PI * v_max * math.sinh(2.0 * geo.tube_radius(cl.ell))
    Path(args.out).write_bytes(write_obj(mesh))
    _write(
        f"kind              {args.kind}\n"
        f"vertices          {len(mesh.vertices)}\n"
        f"triangles         {len(mesh.triangles)}\n"
        f"discrete area     {mesh.hyperbolic_area():.12g}\n"
        f"continuum area    {reference:.12g}\n"
        f"output            {args.out}\n"
    )
    return EXIT_OK


def cmd_expand(args) -> int:
    e = geo.expansion_series(args.ell)
    _write(
        f"ell               {args.ell:.12g}\n"
        f"exact             {e.exact_value:.12g}\n"
        f"series            {e.series_value:.12g}\n"
        f"remainder         {e.remainder:.12g}\n"
        f"floor 1/(2b)      {e.floor:.12g}\n"
        f"exact > floor     {str(e.above_floor).lower()}\n"
    )
    return EXIT_OK


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

def _genus(text: str) -> int:
    try:
        return geo.check_genus(int(text))
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(minimum: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {value}")
        return value
    return parse


def _finite(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite, got {text!r}")
    return value


def _positive(text: str) -> float:
    value = _finite(text)
    if value <= 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helitube",
        description="Tube geometry and complex-length certificates for short geodesics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="certify one complex length")
    p.add_argument("--ell", type=_positive, required=True)
    p.add_argument("--theta", type=_finite, required=True)
    p.add_argument("--genus", type=_genus, default=2)
    p.add_argument("--require", choices=("theorem1", "theorem2"))
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("batch", help="certify every curve of a spectrum file")
    p.add_argument("--input", help="native spectrum file, or '-' for stdin")
    p.add_argument("--fixtures", action="store_true", help="use the six built-in worked examples")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("constants", help="print the length thresholds")
    p.add_argument("--genus", type=_genus, default=2)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("mesh", help="write an OBJ mesh of a helicoid patch or tube boundary")
    p.add_argument("--ell", type=_positive, required=True)
    p.add_argument("--theta", type=_finite, required=True)
    p.add_argument("--v-max", type=_positive, default=None)
    p.add_argument("--nu", type=_positive_int(2), default=64)
    p.add_argument("--nv", type=_positive_int(2), default=64)
    p.add_argument("--kind", choices=("helicoid", "tube"), default="helicoid")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mesh)

    p = sub.add_parser("expand", help="small-length expansion of sqrt(ell)(cosh r0 - 1)")
    p.add_argument("--ell", type=_positive, required=True)
    p.set_defaults(func=cmd_expand)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except OutOfMeyerhoffRange as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except DomainError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
