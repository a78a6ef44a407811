"""Command-line interface: ``heckemoments <subcommand> [flags]``.

Exit status is 0 on success, 2 on a usage error and 1 when a computation fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional, Sequence

from . import __version__
from .cache import LValueCache
from .fields import get_field, parse_quadint
from .gauss import gauss_sum_g
from .lfunc import (
    DIRICHLET_FAMILIES,
    HECKE_FAMILIES,
    dirichlet_L_central,
    functional_equation_residual,
    hecke_L_central,
)
from .moments import (
    CONSTANT_FORMULAS,
    FAMILIES,
    SCHEMA_VERSION,
    moment,
    patterson_diagnostic,
    predicted_constant,
)
from .primes import enumerate_prime_elements
from .symbols import induced_dirichlet_character, residue_symbol


class UsageError(Exception):
    """Bad input that argparse could not catch; maps to exit status 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would call sys.exit itself
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _field_opt(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("--field", choices=["qi", "qw"], required=required, help="Z[i] or Z[w]")


def _out_opts(p: argparse.ArgumentParser, default: str) -> None:
    p.add_argument("--format", choices=["csv", "json"], default=default)
    p.add_argument("--out", help="write here instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="heckemoments", description="Residue symbols, Gauss sums and moments of Hecke L-values.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("primes", help="list prime elements by norm")
    _field_opt(p, required=True)
    p.add_argument("--max-norm", type=int, required=True)
    p.add_argument("--class", dest="class_modulus", default="1", help="congruence class modulus, e.g. 9 or -2+2*i")
    _out_opts(p, "csv")

    p = sub.add_parser("symbol", help="n-th power residue symbol (a/m)_n")
    _field_opt(p)
    p.add_argument("--order", type=int, choices=[2, 3, 4], required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--mod", required=True)
    _out_opts(p, "json")

    p = sub.add_parser("gauss", help="Gauss sum g_n(r, c)")
    _field_opt(p)
    p.add_argument("--order", type=int, choices=[2, 3, 4], required=True)
    p.add_argument("--r", default="1")
    p.add_argument("--mod", required=True)
    _out_opts(p, "json")

    p = sub.add_parser("lvalue", help="central value L(1/2, chi)")
    _field_opt(p)
    p.add_argument("--family", choices=list(HECKE_FAMILIES + DIRICHLET_FAMILIES), required=True)
    p.add_argument("--pi", required=True, help="prime element; write negative values as --pi=-2-3*w")
    p.add_argument("--balance", type=float)
    _out_opts(p, "json")

    p = sub.add_parser("moment", help="weighted first moment over a family")
    p.add_argument("--family", choices=list(FAMILIES), required=True)
    p.add_argument("--y", type=float, help="scale y (Hecke families)")
    p.add_argument("--Q", type=float, help="scale Q (Dirichlet families)")
    p.add_argument("--B", type=float, help="linear coefficient for the quadratic families")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cache", help="JSON-lines L-value cache")
    p.add_argument("--csv", dest="csv_path", help="also write per-prime contributions here")
    _out_opts(p, "json")

    p = sub.add_parser("constants", help="predicted leading constants")
    _out_opts(p, "json")

    p = sub.add_parser("diagnose", help="partial sums of Gauss sums over primes")
    _field_opt(p)
    p.add_argument("--order", type=int, choices=[3, 4], required=True)
    p.add_argument("--x-max", type=float, required=True)
    p.add_argument("--workers", type=int, default=1)
    _out_opts(p, "csv")
    return parser


# ----------------------------------------------------------------- emitters


def _rows_to_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _record(fmt: str, d: dict) -> str:
    if fmt == "json":
        return _json({"schema_version": SCHEMA_VERSION, **d})
    return _rows_to_csv(list(d), [list(d.values())])


def _parse(text: str, field: Optional[str]):
    try:
        return parse_quadint(text, field)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ----------------------------------------------------------------- commands


def _cmd_primes(args) -> str:
    cm = args.class_modulus
    modulus = int(cm) if cm.lstrip("+-").isdigit() else _parse(cm, args.field)
    primes = enumerate_prime_elements(args.field, args.max_norm, modulus)
    rows = [(pe.value.a, pe.value.b, pe.norm, pe.split_type) for pe in primes]
    header = ["a", "b", "norm", "split_type"]
    if args.format == "json":
        return _json({"schema_version": SCHEMA_VERSION, "field": args.field,
                      "primes": [dict(zip(header, r)) for r in rows]})
    return _rows_to_csv(header, rows)


def _cmd_symbol(args) -> str:
    m = _parse(args.mod, args.field)
    a = _parse(args.a, m.field) if not args.a.lstrip("+-").isdigit() else int(args.a)
    sym = residue_symbol(a, m, args.order)
    z = complex(sym)
    return _record(args.format, {
        "order": args.order, "a": str(a), "mod": str(m),
        "is_zero": sym.is_zero, "index": None if sym.is_zero else sym.index,
        "re": z.real, "im": z.imag,
    })


def _cmd_gauss(args) -> str:
    c = _parse(args.mod, args.field)
    r = _parse(args.r, c.field) if not args.r.lstrip("+-").isdigit() else int(args.r)
    g = gauss_sum_g(args.order, r, c)
    return _record(args.format, {"order": args.order, "r": str(r), "mod": str(c),
                                 "re": g.re, "im": g.im, "err": g.err})


def _cmd_lvalue(args) -> str:
    if args.family in DIRICHLET_FAMILIES:
        n = 3 if args.family == "dirichlet-cubic" else 4
        pi = _parse(args.pi, "qw" if n == 3 else "qi")
        rec = dirichlet_L_central(induced_dirichlet_character(pi, n), args.balance)
        residual = None
    else:
        pi = _parse(args.pi, args.field)
        rec = hecke_L_central(args.family, pi, balance=args.balance)
        residual = functional_equation_residual(rec)
    return _record(args.format, {
        "family": rec.family, "pi": str(pi), "conductor_norm": rec.conductor_norm,
        "re": rec.value.re, "im": rec.value.im, "err": rec.value.err,
        "residual": residual, "balance": rec.balance, "truncation": rec.truncation,
    })


def _cmd_moment(args) -> str:
    dirichlet = args.family.startswith("dirichlet")
    scale = args.Q if dirichlet else args.y
    if scale is None:
        scale = args.y if dirichlet else args.Q
    if scale is None:
        raise UsageError("moment needs --y (or --Q for Dirichlet families)")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    cache = LValueCache(args.cache) if args.cache else None
    rep = moment(args.family, scale, workers=args.workers, cache=cache, B=args.B)
    if cache is not None and cache.warnings:
        print(f"warning: skipped {cache.warnings} corrupt cache line(s)", file=sys.stderr)
    if args.csv_path:
        _emit(rep.contributions_csv(), args.csv_path)
    if args.format == "csv":
        return rep.contributions_csv()
    return rep.to_json() + "\n"


def _cmd_constants(args) -> str:
    rows = [(k, CONSTANT_FORMULAS[k], predicted_constant(k)) for k in CONSTANT_FORMULAS]
    if args.format == "csv":
        return _rows_to_csv(["name", "formula", "value"], rows)
    return _json({"schema_version": SCHEMA_VERSION,
                  "constants": {k: {"formula": f, "value": v} for k, f, v in rows}})


def _cmd_diagnose(args) -> str:
    tag = "qw" if args.order == 3 else "qi"
    if args.field is not None and args.field != tag:
        raise UsageError(f"order {args.order} requires --field {tag}")
    table = patterson_diagnostic(tag, args.order, args.x_max, workers=args.workers)
    header = ["x", "S_re", "S_im", "abs_S", "prime_count", "shape_27_32", "shape_19_20"]
    rows = [[r.x, r.S_re, r.S_im, r.abs_S, r.prime_count, r.shape_27_32, r.shape_19_20] for r in table]
    if args.format == "json":
        return _json({"schema_version": SCHEMA_VERSION, "order": args.order,
                      "rows": [dict(zip(header, r)) for r in rows]})
    return _rows_to_csv(header, rows)


_COMMANDS = {
    "primes": _cmd_primes,
    "symbol": _cmd_symbol,
    "gauss": _cmd_gauss,
    "lvalue": _cmd_lvalue,
    "moment": _cmd_moment,
    "constants": _cmd_constants,
    "diagnose": _cmd_diagnose,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text = _COMMANDS[args.command](args)
        _emit(text, getattr(args, "out", None))
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
