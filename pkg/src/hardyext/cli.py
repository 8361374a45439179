"""Command-line front end.

Exit codes: 0 ok, 2 numeric failure, 3 degenerate input, 4 matrix outside
the isometry group, 64 usage error. Results go to stdout, diagnostics to
stderr. Numbers print with 17 significant digits; poles and other masked
values become empty CSV cells or JSON null.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

import numpy as np

from . import checks
from . import extfinite as ef
from . import forms
from . import specfun as sf
from . import spectral11 as sp
from .errors import (
    BracketError,
    ConvergenceError,
    DegenerateSetError,
    DimensionError,
    DomainError,
    PoleError,
    QuadratureError,
    RadiusError,
)

EXIT_OK = 0
EXIT_NUMERIC = 2
EXIT_DEGENERATE = 3
EXIT_GROUP = 4
EXIT_USAGE = 64

NUMERIC_ERRORS = (BracketError, ConvergenceError, QuadratureError, PoleError, RadiusError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# Formatting


def fmt_number(v) -> str:
    """17 significant digits in lowercase scientific notation; '' for masked values."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    x = float(v)
    if not math.isfinite(x):
        return ""
    return f"{x:.16e}"


def _json_value(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_number(v) or "null"
    if isinstance(v, (complex, np.complexfloating)):
        return _json_value([v.real, v.imag])
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(u)}" for k, u in v.items()) + "}"
    if isinstance(v, np.ndarray):
        v = v.tolist()
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(u) for u in v) + "]"
    raise TypeError(f"cannot encode {type(v).__name__}")


def dumps_json(obj) -> str:
    return _json_value(obj) + "\n"


def dumps_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(c if isinstance(c, str) else fmt_number(c) for c in r))
    return "\n".join(lines) + "\n"


def _emit(fmt: str, header: Sequence[str], rows: List[Sequence], meta: Optional[dict] = None) -> str:
    if fmt == "csv":
        return dumps_csv(header, rows)
    doc = dict(meta or {})
    doc["columns"] = list(header)
    doc["rows"] = [list(r) for r in rows]
    return dumps_json(doc)


# --------------------------------------------------------------------------
# Argument types


def _theta(text: str) -> float:
    try:
        return sp.ExtensionParameter(float(text)).theta
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(f"theta must be a real number in (-pi, pi], got {text!r}") from exc


def _real(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from exc


def _nonneg_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if n < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return n


def _pos_int(text: str) -> int:
    n = _nonneg_int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


# --------------------------------------------------------------------------
# Commands


def cmd_spectrum(args) -> str:
    table = sp.spectrum(args.theta, args.n_max)
    rows = [(e.n, e.lam, e.lo, e.hi, e.residual) for e in table.entries]
    meta = {"theta": table.theta.theta, "residual_bound": table.residual_bound}
    return _emit(args.format, ("n", "lambda", "lo", "hi", "residual"), rows, meta)


def cmd_kernel(args) -> str:
    F = ef.BoundarySet(tuple(args.points))
    gk = ef.gram(F)
    numeric, product = ef.vandermonde_certificate(F)
    if args.format == "csv":
        rows = []
        for i in range(F.m):
            for j in range(F.m):
                z = gk.Z_matrix[i, j]
                rows.append(("gram", i, j, z.real, z.imag))
        for i, v in enumerate(gk.eigenvalues):
            rows.append(("eigenvalue", i, None, v, None))
        rows.append(("vandermonde", None, None, abs(numeric), None))
        rows.append(("vandermonde_product", None, None, abs(product), None))
        return dumps_csv(("quantity", "i", "j", "re", "im"), rows)
    return dumps_json({
        "angles": list(F.angles),
        "gram": [[[z.real, z.imag] for z in row] for row in gk.Z_matrix],
        "eigenvalues": list(gk.eigenvalues),
        "vandermonde": abs(numeric),
        "vandermonde_product": abs(product),
    })


class GroupFailure(Exception):
    def __init__(self, defect: float):
        super().__init__(f"matrix is not in the isometry group: defect {defect:.3e}")
        self.defect = defect


def _read_extension(args):
    try:
        with open(args.matrix_file, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read matrix file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"matrix file is not valid JSON: {exc}") from exc
    if args.points:
        doc["angles"] = [repr(a) for a in args.points]
    if "angles" not in doc:
        raise UsageError("no boundary set: give --points or an 'angles' entry in the matrix file")
    try:
        return ef.load_extension(json.dumps(doc))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed matrix file: {exc}") from exc


def cmd_extension_spectrum(args) -> str:
    F, gk, iso = _read_extension(args)
    if not iso.accepted:
        raise GroupFailure(iso.defect)
    spec = ef.extension_spectrum(F, iso.M, args.n_max, gk=gk)
    rows = [(e.lam, e.lo, e.hi, e.multiplicity, e.residual) for e in spec.entries]
    meta = {"angles": list(F.angles), "defect": iso.defect}
    return _emit(args.format, ("lambda", "lo", "hi", "multiplicity", "residual"), rows, meta)


def cmd_verify(args) -> str:
    rep = checks.run(args.suite, args.seed)
    args._verify_passed = rep.passed
    d = rep.to_dict()
    d = {"suite": args.suite, "seed": args.seed, **d}
    return dumps_json(d)


PLOT_DEFAULTS = {
    "G": (-3.0, 5.0),
    "Z": (0.0, 1.0),
    "lambda_vs_theta": (-math.pi, math.pi),
    "projection_norm": (-3.0, 3.0),
}


def _masked(fn, x):
    try:
        v = fn(x)
    except PoleError:
        return None
    return v if math.isfinite(v) else None


def cmd_plotdata(args) -> str:
    lo, hi = args.range if args.range else PLOT_DEFAULTS[args.kind]
    if not lo < hi:
        raise UsageError("range must satisfy lo < hi")
    xs = np.linspace(lo, hi, args.samples)
    kind = args.kind
    if kind == "G":
        header = ("x", "G")
        rows = [(x, _masked(sp.G, x)) for x in xs]
    elif kind == "Z":
        header = ("x", "re", "im")
        rows = []
        for x in xs:
            z = sf.hurwitz_Z(x)
            rows.append((x, z.real, z.imag))
    elif kind == "projection_norm":
        header = ("x", "norm_sq")
        rows = [(x, forms.projection_norm(x)) for x in xs]
    else:
        if lo <= -math.pi - sp.PI_SNAP or hi > math.pi + sp.PI_SNAP:
            raise UsageError("lambda_vs_theta needs a range inside [-pi, pi]")
        header = ("theta",) + tuple(f"lambda_{n}" for n in range(args.n_max + 1))
        rows = []
        for t in xs:
            rows.append((float(t),) + tuple(sp.spectrum(float(t), args.n_max).values))
    return _emit(args.format, header, rows, {"kind": kind})


# --------------------------------------------------------------------------
# Parser and entry point


def _add_common(s: argparse.ArgumentParser, fmt: str = "json") -> None:
    s.add_argument("--config", help="key=value file whose entries act as default flags")
    s.add_argument("--format", choices=("json", "csv"), default=fmt)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hardyext", description="Spectra and kernels of selfadjoint extensions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("spectrum", help="eigenvalues of the one-parameter family")
    _add_common(s)
    s.add_argument("--theta", type=_theta, required=True)
    s.add_argument("--n-max", type=_nonneg_int, default=10)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("kernel", help="Gram matrix of a boundary set")
    _add_common(s)
    s.add_argument("--points", type=_real, nargs="+", required=True,
                   help="angles as fractions of a full turn, e.g. 0 1/2")
    s.set_defaults(func=cmd_kernel)

    s = sub.add_parser("extension-spectrum", help="spectrum for a boundary set and matrix")
    _add_common(s)
    s.add_argument("--matrix-file", required=True)
    s.add_argument("--points", type=_real, nargs="+", help="override the angles in the matrix file")
    s.add_argument("--n-max", type=_nonneg_int, default=10)
    s.set_defaults(func=cmd_extension_spectrum)

    s = sub.add_parser("verify", help="run invariant suites")
    _add_common(s)
    s.add_argument("--suite", choices=checks.SUITES + ("all",), default="all")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("plotdata", help="sampled curves for plotting")
    _add_common(s, fmt="csv")
    s.add_argument("--kind", choices=tuple(PLOT_DEFAULTS), required=True)
    s.add_argument("--range", type=_real, nargs=2, metavar=("LO", "HI"))
    s.add_argument("--samples", type=_pos_int, default=1000)
    s.add_argument("--n-max", type=_nonneg_int, default=5)
    s.set_defaults(func=cmd_plotdata)
    return p


def _config_tokens(path: str) -> List[str]:
    tokens: List[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("_", "-")
            if key in ("config", "command"):
                continue
            tokens.append(f"--{key}")
            tokens.extend(value.split())
    return tokens


def _split_config(argv: List[str]):
    """Remove --config PATH (or --config=PATH) from argv; returns (argv, path)."""
    out, path, i = [], None, 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--config" and i + 1 < len(argv):
            path, i = argv[i + 1], i + 2
            continue
        if tok.startswith("--config="):
            path = tok.split("=", 1)[1]
        else:
            out.append(tok)
        i += 1
    return out, path


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    argv, config = _split_config(argv)
    if config is not None:
        try:
            extra = _config_tokens(config)
        except OSError as exc:
            parser.exit(EXIT_USAGE, f"hardyext: cannot read config: {exc}\n")
        except UsageError as exc:
            parser.exit(EXIT_USAGE, f"hardyext: {exc}\n")
        # config entries go first so explicit flags win
        if argv and not argv[0].startswith("-"):
            argv = [argv[0]] + extra + argv[1:]
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except UsageError as exc:
        print(f"hardyext: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GroupFailure as exc:
        print(f"hardyext: {exc}", file=sys.stderr)
        print(fmt_number(exc.defect), file=sys.stderr)
        return EXIT_GROUP
    except DegenerateSetError as exc:
        print(f"hardyext: degenerate boundary set: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except NUMERIC_ERRORS as exc:
        print(f"hardyext: numeric failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, DimensionError) as exc:
        print(f"hardyext: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(out)
    if args.command == "verify" and not args._verify_passed:
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
