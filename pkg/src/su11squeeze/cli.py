"""Command-line entry point: ``su11squeeze {coeffs,eval,scan,figure,validate}``.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 validation
discrepancy outside the committed ledger.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys

from su11squeeze import bgcs, pcs, scan
from su11squeeze._version import __version__
from su11squeeze.errors import SqueezeError
from su11squeeze.export import render
from su11squeeze.fock import oracle_moments
from su11squeeze.hamiltonian import CouplingParams, coefficients

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_DISCREPANCY = 3

_PI_TERM = re.compile(r"^([-+]?(?:\d+(?:\.\d*)?|\.\d+)?)\*?pi(?:/((?:\d+(?:\.\d*)?|\.\d+)))?$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def parse_number(text: str) -> float:
    """Float, optionally written with pi: ``2pi``, ``-pi/2``, ``3*pi/4``."""
    s = text.strip().replace(" ", "")
    try:
        return float(s)
    except ValueError:
        pass
    m = _PI_TERM.match(s)
    if not m:
        raise argparse.ArgumentTypeError("not a number: %r" % text)
    coef = m.group(1)
    if coef in ("", "+"):
        value = 1.0
    elif coef == "-":
        value = -1.0
    else:
        value = float(coef)
    value *= math.pi
    if m.group(2):
        value /= float(m.group(2))
    return value


def parse_grid(text: str) -> scan.Axis:
    parts = text.split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("grid must look like name:min:max:steps, got %r" % text)
    name, lo, hi, steps = parts
    try:
        return scan.Axis(name, parse_number(lo), parse_number(hi), int(steps))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_physics(p, time_default=0.0):
    p.add_argument("--omega", type=parse_number, default=3.0, help="free frequency omega > 0 (default 3)")
    p.add_argument("--lambda", dest="lambda_", type=parse_number, default=1.0, help="coupling lambda >= 0 (default 1)")
    p.add_argument("--k", type=parse_number, default=0.5, help="Bargmann index (default 0.5)")
    p.add_argument("--time", type=parse_number, default=time_default, help="interaction time in --time-unit (default %g)" % time_default)
    p.add_argument(
        "--time-unit",
        choices=scan.TIME_UNITS,
        default="t",
        help="t: bare time; tl: t*lambda; tw: t*omega; gt: g*t with g = sqrt|omega^2 - lambda^2| (default t)",
    )


def _add_output(p, default_format="csv"):
    p.add_argument("--out", help="write to this file instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default=default_format, help="output format (default %s)" % default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="su11squeeze", description="Squeezing of SU(1,1) coherent states under H = 2 omega K_z + 2 lambda K_x.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("coeffs", help="transport coefficients R1, R2, R3, J, S, V")
    _add_physics(p, 1.0)
    _add_output(p, "json")

    p = sub.add_parser("eval", help="squeezing factors of one state")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--r", type=parse_number, help="Perelomov state with this r")
    grp.add_argument("--zmag", type=parse_number, help="Barut-Girardello state with this |Z|")
    p.add_argument("--phi", type=parse_number, default=0.0, help="phase Phi in radians (default 0)")
    _add_physics(p, 1.0)
    p.add_argument("--path", choices=scan.PATHS, default=pcs.PAPER, help="paper: printed forms; transport: exact moments; oracle: number basis (default paper)")
    _add_output(p, "json")

    p = sub.add_parser("scan", help="squeezing regions over a phase plane")
    p.add_argument(
        "--grid",
        type=parse_grid,
        action="append",
        required=True,
        help="axis as name:min:max:steps, given twice; names r/phi (PCS) or zmag/phi (BGCS); min/max accept pi, e.g. phi:0:2pi:201",
    )
    _add_physics(p, 0.0)
    p.add_argument("--path", choices=scan.PATHS, default=pcs.PAPER, help="evaluation path (default paper)")
    p.add_argument("--allow-large-oracle", action="store_true", help="lift the 64x64 limit on oracle scans")
    p.add_argument("--pi-units", action="store_true", help="add angle columns in units of pi (CSV)")
    _add_output(p)

    p = sub.add_parser("figure", help="dataset behind one of the figure presets 1-9")
    p.add_argument("n", help="figure number 1-9 (panel letters such as 1a are accepted)")
    p.add_argument("--path", choices=scan.PATHS, default=scan.DEFAULT_FIGURE_PATH, help="evaluation path (default %s)" % scan.DEFAULT_FIGURE_PATH)
    p.add_argument("--steps", type=int, help="points per axis (default 201, or 64 on the oracle path)")
    p.add_argument("--pi-units", action="store_true", help="add angle columns in units of pi (CSV)")
    _add_output(p)

    p = sub.add_parser("validate", help="reconcile printed formulas with the oracle and the ledger")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--ledger", help="ledger file (default: the packaged ledger)")
    return parser


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _coupling(args) -> tuple[CouplingParams, float]:
    try:
        coupling = CouplingParams(args.omega, args.lambda_)
        t = scan.physical_time(args.time, args.time_unit, coupling)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if t < 0:
        raise UsageError("time must be >= 0")
    return coupling, t


def _record_text(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record, sort_keys=True, allow_nan=False) + "\n"
    keys = list(record)
    vals = [repr(record[k]) if isinstance(record[k], float) else str(record[k]) for k in keys]
    return ",".join(keys) + "\n" + ",".join(vals) + "\n"


def cmd_coeffs(args) -> int:
    coupling, t = _coupling(args)
    c = coefficients(coupling, t)
    record = {"regime": coupling.regime.value, "t": t, "R1": c.r1, "R2": c.r2, "R3": c.r3, "J": c.j, "S": c.s, "V": c.v}
    _emit(_record_text(record, args.format), args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    coupling, t = _coupling(args)
    try:
        if args.r is not None:
            params = pcs.PcsParams(args.r, args.phi, args.k)
            family = "pcs"
        else:
            params = bgcs.BgcsParams(args.zmag, args.phi, args.k)
            family = "bgcs"
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.path == pcs.ORACLE:
        report = pcs.report_from_moments(oracle_moments(family, params, coupling, t), pcs.ORACLE)
    else:
        coeffs = coefficients(coupling, t)
        fn = {
            ("pcs", pcs.PAPER): pcs.pcs_variances,
            ("pcs", pcs.TRANSPORT): pcs.pcs_transport,
            ("bgcs", pcs.PAPER): bgcs.bgcs_variances,
            ("bgcs", pcs.TRANSPORT): bgcs.bgcs_transport,
        }[(family, args.path)]
        report = fn(params, coeffs)
    if not all(math.isfinite(v) for v in report[:5]):
        raise ArithmeticError("non-finite result")
    _emit(_record_text(report._asdict(), args.format), args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    if len(args.grid) != 2:
        raise UsageError("scan needs exactly two --grid axes")
    names = {a.name for a in args.grid}
    family = next((f for f, axes in scan.PLANE_AXES.items() if set(axes) == names), None)
    if family is None:
        raise UsageError("grid axes must be r and phi, or zmag and phi")
    try:
        grid = scan.GridSpec(args.grid[0], args.grid[1], family, args.k, args.omega, args.lambda_, args.time, args.time_unit)
        _coupling(args)
        result = scan.scan_plane(grid, args.path, args.allow_large_oracle)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(render(result, args.format, args.pi_units), args.out)
    return EXIT_OK


def cmd_figure(args) -> int:
    m = re.fullmatch(r"([1-9])([ab]?)", args.n)
    if not m:
        raise UsageError("figure must be 1-9, optionally with a panel letter")
    if args.steps is not None and args.steps < 2:
        raise UsageError("--steps must be >= 2")
    result = scan.figure(int(m.group(1)), args.path, args.steps)
    _emit(render(result, args.format, args.pi_units), args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    from su11squeeze.validate import validate

    report = validate(args.out, args.ledger)
    for c in report.checks:
        mark = "ok " if c.consistent else "BAD"
        print("%s %-16s %-10s dev=%.3e  ledger=%s" % (mark, c.check_id, c.status, c.deviation, c.ledger_status))
    return EXIT_OK if report.clean else EXIT_DISCREPANCY


COMMANDS = {
    "coeffs": cmd_coeffs,
    "eval": cmd_eval,
    "scan": cmd_scan,
    "figure": cmd_figure,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print("su11squeeze: error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except (SqueezeError, ArithmeticError) as exc:
        print("su11squeeze: numerical failure: %s" % exc, file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print("su11squeeze: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
