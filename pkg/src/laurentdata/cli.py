"""Command line front end.

Every command prints one JSON report carrying ``"schema_version": 1``.
Exit status is 0 on success, 1 when a mathematical check fails and 2 on
bad input, in which case the report is ``{"error": {"kind", "detail"}}``.
A one-line summary for people goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import mpmath

from . import selfcheck as _selfcheck
from .curves import (
    HyperellipticCurve,
    LaurentData,
    differential_basis,
    expand_at_infinity,
    verify_annihilator_lemma,
    weierstrass_semigroup,
)
from .eav import (
    ExtendedAV,
    SiegelPoint,
    build_from_curve,
    de_extend,
    extend_from_tau,
    validate,
    with_ambient_n,
)
from .errors import LaurentDataError, SchemaError
from .periods import DEFAULT_PRECISION_BITS, verify_classical_reciprocity
from .series import LaurentSeries, residue_pair
from .window import WindowSpec
from . import scalars

SCHEMA_VERSION = 1
RECIPROCITY_TOL = 1e-9

INPUT_ERRORS = {
    "SchemaError", "InvalidCurve", "SingularCurve", "OddDegreeRequired", "NotASquare",
    "InvalidWindow", "NotSiegel", "GenusUnsupported", "DimensionMismatch", "BackendMismatch",
    "UsageError", "WindowTooSmall", "OddValuation", "InsufficientPrecision",
}


class UsageError(Exception):
    kind = "UsageError"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_json(text: str, what: str):
    """Parse inline JSON, or read it from a file if ``text`` names one."""
    src = text
    if not text.lstrip().startswith(("{", "[", '"')):
        path = Path(text)
        if not path.is_file():
            raise SchemaError(f"{what}: not inline JSON and no such file {text!r}")
        src = path.read_text()
    try:
        return json.loads(src)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{what}: invalid JSON ({exc.msg})") from None


def _curve(args) -> HyperellipticCurve:
    if not args.curve:
        raise UsageError("--curve is required")
    return HyperellipticCurve.from_json(_load_json(args.curve, "--curve"))


def _window(args, default: int) -> WindowSpec:
    if not args.window:
        return WindowSpec.square(default)
    try:
        parts = [int(p) for p in args.window.split(",")]
    except ValueError:
        raise SchemaError(f"--window expects N or N,M (got {args.window!r})") from None
    if len(parts) == 1:
        return WindowSpec.square(parts[0])
    if len(parts) == 2:
        return WindowSpec(parts[0], parts[1])
    raise SchemaError("--window expects N or N,M")


def _tau(text: str) -> SiegelPoint:
    text = text.strip()
    if text.startswith("{"):
        return SiegelPoint.from_json(_load_json(text, "--tau"))
    try:
        value = complex(text.replace("i", "j").replace(" ", ""))
    except ValueError:
        raise SchemaError(f"--tau expects JSON or a complex number (got {text!r})") from None
    return SiegelPoint([[value]])


def _laurent_data(args) -> LaurentData:
    return LaurentData.from_json(_load_json(args.laurent_data, "--laurent-data"))


# -- commands -------------------------------------------------------------------


def cmd_expand(args):
    curve = _curve(args)
    g = curve.genus
    order = _window(args, 4 * g + 4).pos
    exp = expand_at_infinity(curve, max(order, 2 * g + 1))
    diff = differential_basis(curve, max(order, 2 * g + 1))
    sg = weierstrass_semigroup(g)
    return 0, {
        "genus": g,
        "order": order,
        "x": exp.x.to_json(),
        "y": exp.y.to_json(),
        "f_antiderivs": [f.to_json() for f in diff.f_antiderivs],
        "g_antiderivs": [h.to_json() for h in diff.g_antiderivs],
        "semigroup": {"generators": list(sg.generators), "gaps": list(sg.gaps)},
    }


def _polarization(value, n: int):
    p = 2j * mpmath.pi * scalars.coerce(value, scalars.COMPLEX)
    return scalars.to_json(p if n % 2 else -p)


def cmd_pairing(args):
    n = args.n
    if args.input:
        obj = _load_json(args.input, "--input")
        try:
            f, g = LaurentSeries.from_json(obj["f"]), LaurentSeries.from_json(obj["g"])
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"--input needs series 'f' and 'g': {exc}") from None
        v = residue_pair(f, g)
        return 0, {"pairing": scalars.to_json(v), "polarization": _polarization(v, n), "n": n}
    if args.laurent_data:
        data = _laurent_data(args)
        fs, gs = data.first_kind, data.second_kind
        if args.n_given is None:
            n = data.ambient_n
    else:
        curve = _curve(args)
        diff = differential_basis(curve, 4 * curve.genus + 4)
        fs, gs = diff.f_antiderivs, diff.g_antiderivs
    m = [[residue_pair(f, g) for g in gs] for f in fs]
    return 0, {
        "pairing_matrix": [[scalars.to_json(x) for x in r] for r in m],
        "polarization_matrix": [[_polarization(x, n) for x in r] for r in m],
        "n": n,
    }


def cmd_annihilator(args):
    if args.laurent_data:
        source = _laurent_data(args)
        window = _window(args, 4 * max(source.genus, 1) + 4)
    else:
        source = _curve(args)
        window = _window(args, 4 * source.genus + 4)
    rep = verify_annihilator_lemma(source, window)
    return (0 if rep.passed else 1), rep.to_json()


def cmd_verify_reciprocity(args):
    curve = _curve(args)
    r = verify_classical_reciprocity(curve, args.precision_bits)
    out = r.to_json()
    out["passed"] = bool(r.rel_err < RECIPROCITY_TOL)
    return (0 if out["passed"] else 1), out


def cmd_extend(args):
    if args.tau:
        tau = _tau(args.tau)
        window = _window(args, tau.g + 1)
        e = extend_from_tau(tau, window, ambient_n=args.n, precision_bits=args.precision_bits)
    else:
        curve = _curve(args)
        window = _window(args, 4 * curve.genus + 4)
        e = build_from_curve(curve, window, precision_bits=args.precision_bits,
                             allow_partial=args.allow_partial, ambient_n=args.n)
    rep = validate(e)
    code = 0 if (rep.passed or e.partial) else 1
    return code, {"eav": e.to_json(), "validation": rep.to_json()}


def cmd_de_extend(args):
    if not args.input:
        raise UsageError("--input is required")
    obj = _load_json(args.input, "--input")
    if isinstance(obj, dict) and "eav" in obj:
        obj = obj["eav"]
    e = ExtendedAV.from_json(obj)
    if args.n_given is not None:
        e = with_ambient_n(e, args.n)
    rep = validate(e)
    if not rep.passed:
        return 1, {"validation": rep.to_json()}
    with mpmath.workprec(e.precision_bits):
        tau = de_extend(e)
        return 0, {"siegel_point": tau.to_json(), "validation": rep.to_json()}


def cmd_selfcheck(args):
    rep = _selfcheck.run()
    return (0 if rep["passed"] else 1), rep


COMMANDS = {
    "expand": cmd_expand,
    "pairing": cmd_pairing,
    "annihilator": cmd_annihilator,
    "verify-reciprocity": cmd_verify_reciprocity,
    "extend": cmd_extend,
    "de-extend": cmd_de_extend,
    "selfcheck": cmd_selfcheck,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="laurentdata", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--curve", help="curve JSON, inline or a path")
        p.add_argument("--laurent-data", help="file of Laurent data")
        p.add_argument("--tau", help="Siegel point JSON or a complex number")
        p.add_argument("--input", help="input JSON, inline or a path")
        p.add_argument("--window", help="N or N,M")
        p.add_argument("--precision-bits", type=int, default=DEFAULT_PRECISION_BITS)
        p.add_argument("--n", type=int, default=None, dest="n_given", help="ambient dimension")
        p.add_argument("--allow-partial", action="store_true")
        p.add_argument("--output", help="write the report here instead of stdout")
    return parser


def _emit(report: dict, output: str | None):
    text = json.dumps(report, indent=2) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> tuple[int, dict]:
    """Run one job and return ``(exit_code, report)`` without printing."""
    code, report, _ = _run(argv)
    return code, report


def _run(argv):
    output = None
    try:
        args = build_parser().parse_args(argv)
        output = args.output
        args.n = args.n_given if args.n_given is not None else 1
        if args.n < 1:
            raise UsageError("--n must be at least 1")
        if args.precision_bits < scalars.MIN_COMPLEX_BITS:
            raise UsageError(f"--precision-bits must be at least {scalars.MIN_COMPLEX_BITS}")
        with mpmath.workprec(args.precision_bits):
            code, body = COMMANDS[args.command](args)
    except (LaurentDataError, UsageError) as exc:
        kind = exc.kind
        code = 2 if kind in INPUT_ERRORS else 1
        body = {"error": {"kind": kind, "detail": str(exc)}}
    report = {"schema_version": SCHEMA_VERSION}
    report.update(body)
    return code, report, output


def summary(code: int, report: dict) -> str:
    """One human-readable line describing a report."""
    if "error" in report:
        err = report["error"]
        return f"{'input error' if code == 2 else 'failed'}: {err['kind']}: {err['detail']}"
    if code == 0:
        return "ok"
    failed = [k for k, v in report.get("validation", report).get("axioms", {}).items() if v is False]
    failed += [k for k, v in report.get("checks", {}).items() if v is False]
    failed += [k for k, v in report.get("suites", {}).items() if not v.get("passed", True)]
    return "failed" + (": " + ", ".join(failed) if failed else "")


def main(argv=None) -> int:
    code, report, output = _run(argv)
    _emit(report, output)
    # JSON goes to stdout (or --output); the summary stays out of the way on stderr
    sys.stderr.write(f"laurentdata: {summary(code, report)}\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
