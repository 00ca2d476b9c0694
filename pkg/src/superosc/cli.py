"""Command-line front end.

Every subcommand prints one JSON document (or CSV with ``--format csv``)
to stdout, or to ``--out PATH``.  Failures exit nonzero and write
``{"error": {"code": ..., "message": ...}}`` to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings

from .analysis import (
    load_sweep_config,
    point_dict,
    points_to_csv,
    required_bits_estimate,
    rows_to_csv,
    run_sweep,
    sweep_points,
    POINT_HEADER,
)
from .arith import PrecisionPolicy, Scalar, parse_rational
from .coefficients import coeffs_binomial, coeffs_closed_form, coeffs_l1_norm, coeffs_vandermonde_solve
from .errors import InvalidSignal, SuperoscError, UsageError
from .grids import Family, make_grid
from .signals import (
    Kind,
    SignalSpec,
    classic_fn,
    classic_product_form,
    classic_yn,
    error_vs_limit,
    eval_derivative,
    local_frequency,
    taylor_check,
)
from .supershift import (
    cexp_generator,
    exp_generator,
    generator_from_dict,
    supershift_eval,
    supershift_signal,
    supershift_taylor_check,
)

DIGITS = 30


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _rational_list(text):
    return [_rational(t) for t in text.split(",") if t.strip()]


def _complex_dict(z):
    return {"re": str(z.re) if z.is_exact else z.re.to_decimal_string(DIGITS),
            "im": str(z.im) if z.is_exact else z.im.to_decimal_string(DIGITS)}


def _scalar_text(s):
    return str(s) if s.is_exact else s.to_decimal_string(DIGITS)


def _add_grid_opts(p, need_a=True):
    p.add_argument("--family", "--grid", dest="family", default="uniform",
                   choices=[f.value for f in Family], help="grid family")
    p.add_argument("--n", type=int, help="order n (n+1 nodes)")
    p.add_argument("--p", type=int, default=None, help="family exponent p")
    p.add_argument("--nodes", type=_rational_list, help="comma-separated custom nodes")
    if need_a:
        p.add_argument("--a", type=_rational, required=True, help="target frequency a")


def _add_io_opts(p):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write output to PATH instead of stdout")


def _grid(args):
    if args.family == "custom":
        if not args.nodes:
            raise UsageError("--family custom needs --nodes")
        return make_grid(args.family, nodes=args.nodes)
    if args.n is None:
        raise UsageError("--n is required for a grid family")
    return make_grid(args.family, args.n, args.p)


def _signal(args):
    kind = Kind(args.kind)
    if kind is Kind.NEW:
        return SignalSpec(coeffs_closed_form(_grid(args), args.a), kind)
    if args.family != "uniform":
        raise InvalidSignal(f"{kind.value} signals use the uniform grid, not {args.family}")
    if args.n is None:
        raise UsageError("--n is required for classic signals")
    if kind is Kind.CLASSIC_FN:
        return classic_fn(args.n, args.a)
    return classic_yn(args.n, args.a, args.m)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="superosc", description="Taylor-matched superoscillating sequences")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("grid", help="build and validate a frequency grid")
    _add_grid_opts(p, need_a=False)
    _add_io_opts(p)

    p = sub.add_parser("coeffs", help="coefficient set on a grid")
    _add_grid_opts(p)
    p.add_argument("--method", choices=("closed-form", "vandermonde-solve", "binomial"), default="closed-form")
    _add_io_opts(p)

    p = sub.add_parser("taylor-check", help="exact derivative residuals at 0")
    _add_grid_opts(p)
    p.add_argument("--kind", choices=[k.value for k in Kind], default="new")
    p.add_argument("--m", type=int, default=1)
    _add_io_opts(p)

    p = sub.add_parser("eval", help="evaluate a signal at points")
    _add_grid_opts(p)
    p.add_argument("--kind", choices=[k.value for k in Kind], default="new")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--x", type=_rational_list, required=True, help="comma-separated sample points")
    p.add_argument("--deriv", type=int, default=0, help="derivative order")
    p.add_argument("--bits", type=int, default=None)
    _add_io_opts(p)

    p = sub.add_parser("classic", help="product form vs Fourier sum of (cos(x/n) + i a sin(x/n))^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--x", type=_rational_list, required=True)
    p.add_argument("--bits", type=int, default=None)
    _add_io_opts(p)

    p = sub.add_parser("supershift", help="supershift sum for a generator G")
    _add_grid_opts(p)
    p.add_argument("--generator", default="exp", help="'exp', 'cexp' or a path to a generator JSON file")
    p.add_argument("--x", type=_rational_list, default=[])
    p.add_argument("--bits", type=int, default=None)
    p.add_argument("--certify", action="store_true", help="check G^(p)(0) != 0 for p <= n")
    _add_io_opts(p)

    p = sub.add_parser("sweep", help="run a sweep config (JSON file)")
    p.add_argument("--config", required=True)
    p.add_argument("--points", action="store_true", help="emit per-(n, x) samples instead of summary rows")
    p.add_argument("--workers", type=int, default=None)
    _add_io_opts(p)

    p = sub.add_parser("bits", help="working precision needed for a target digit count")
    _add_grid_opts(p)
    p.add_argument("--digits", type=int, required=True)
    _add_io_opts(p)
    return parser


def _kv_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in doc.items():
        w.writerow([k, json.dumps(v) if isinstance(v, (list, dict)) else v])
    return buf.getvalue()


def _table_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def cmd_grid(args, policy):
    grid = _grid(args)
    doc = grid.to_dict()
    rows = [{"j": j, "node": str(h)} for j, h in enumerate(grid.nodes)]
    return doc, _table_csv(("j", "node"), rows)


def cmd_coeffs(args, policy):
    if args.method == "binomial":
        if args.n is None:
            raise UsageError("--n is required for binomial coefficients")
        c = coeffs_binomial(args.n, args.a)
    elif args.method == "vandermonde-solve":
        c = coeffs_vandermonde_solve(_grid(args), args.a)
    else:
        c = coeffs_closed_form(_grid(args), args.a)
    doc = c.to_dict()
    doc["l1_norm"] = str(coeffs_l1_norm(c))
    doc["superoscillatory"] = c.superoscillatory
    rows = [{"j": j, "node": str(h), "value": str(v)} for j, (h, v) in enumerate(zip(c.grid.nodes, c.values))]
    return doc, _table_csv(("j", "node", "value"), rows)


def cmd_taylor_check(args, policy):
    report = taylor_check(_signal(args))
    doc = report.to_dict()
    rows = [{"p": p, "re": r["re"], "im": r["im"]} for p, r in enumerate(doc["residuals"])]
    return doc, _table_csv(("p", "re", "im"), rows)


def cmd_eval(args, policy):
    sig = _signal(args)
    bits = args.bits or policy.base_bits
    points = []
    for x in args.x:
        xs = Scalar(x)
        value = eval_derivative(sig, args.deriv, xs, bits, policy=policy)
        row = {"x": str(x), "value": _complex_dict(value)}
        if args.deriv == 0:
            row["abs_err"] = _scalar_text(error_vs_limit(sig, xs, bits=bits, policy=policy))
            try:
                row["local_freq"] = _scalar_text(local_frequency(sig, xs, bits, policy=policy))
            except SuperoscError as exc:
                row["local_freq"] = None
                row["local_freq_error"] = exc.code
        points.append(row)
    doc = {"kind": sig.kind.value, "n": sig.n, "a": str(sig.coeffs.target_a), "bits": bits,
           "limit_exponent": str(sig.limit_exponent), "deriv": args.deriv, "points": points}
    rows = [{"n": sig.n, "x": p["x"], "re": p["value"]["re"], "im": p["value"]["im"],
             "abs_err": p.get("abs_err", ""), "local_freq": p.get("local_freq") or ""} for p in points]
    return doc, _table_csv(POINT_HEADER, rows)


def cmd_classic(args, policy):
    bits = args.bits or policy.base_bits
    sig = classic_fn(args.n, args.a)
    points = []
    for x in args.x:
        prod = classic_product_form(args.n, args.a, Scalar(x), bits, policy=policy)
        total = eval_derivative(sig, 0, Scalar(x), bits, policy=policy)
        diff = prod - total
        points.append({"x": str(x), "product": _complex_dict(prod), "sum": _complex_dict(total),
                       "abs_diff": _scalar_text(abs(diff) if not diff.is_exact else abs(diff.re) + abs(diff.im))})
    doc = {"n": args.n, "a": str(args.a), "bits": bits,
           "coefficients": [str(c) for c in sig.coeffs.values], "points": points}
    return doc, _kv_csv(doc)


def _generator(spec):
    if spec == "exp":
        return exp_generator()
    if spec == "cexp":
        return cexp_generator()
    try:
        with open(spec) as fh:
            return generator_from_dict(json.load(fh))
    except OSError as exc:
        raise UsageError(f"cannot read generator file {spec!r}: {exc}") from exc


def cmd_supershift(args, policy):
    gen = _generator(args.generator)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sig = supershift_signal(_grid(args), args.a, gen, certify=args.certify)
    bits = args.bits or policy.base_bits
    report = supershift_taylor_check(sig)
    points = []
    for x in args.x:
        r = supershift_eval(sig, Scalar(x), bits, policy=policy)
        points.append({"x": str(x), "value": _complex_dict(r.value), "error_bound": _scalar_text(r.error_bound)})
    doc = {"generator": gen.to_dict(), "coefficients": sig.coeffs.to_dict(),
           "taylor": {"exact": report.exact, "max_abs": str(report.max_abs)}, "points": points}
    if sig.coeffs.warnings:
        doc["warnings"] = list(sig.coeffs.warnings)
    return doc, _kv_csv(doc)


def cmd_sweep(args, policy):
    cfg = load_sweep_config(args.config)
    if args.points:
        pts = sweep_points(cfg)
        return {"points": [point_dict(p) for p in pts]}, points_to_csv(pts)
    rows = run_sweep(cfg, workers=args.workers)
    return {"rows": [r.to_dict() for r in rows]}, rows_to_csv(rows)


def cmd_bits(args, policy):
    grid = _grid(args)
    bits = required_bits_estimate(grid, args.a, args.digits, policy.guard_bits)
    doc = {"n": grid.n, "a": str(args.a), "digits": args.digits, "bits": bits}
    return doc, _kv_csv(doc)


COMMANDS = {
    "grid": cmd_grid,
    "coeffs": cmd_coeffs,
    "taylor-check": cmd_taylor_check,
    "eval": cmd_eval,
    "classic": cmd_classic,
    "supershift": cmd_supershift,
    "sweep": cmd_sweep,
    "bits": cmd_bits,
}


def main(argv=None) -> int:
    out_path = None
    try:
        args = build_parser().parse_args(argv)
        out_path = args.out
        policy = PrecisionPolicy.from_env()
        doc, table = COMMANDS[args.command](args, policy)
        text = table if args.format == "csv" else json.dumps(doc, indent=2) + "\n"
    except SuperoscError as exc:
        sys.stderr.write(json.dumps({"error": exc.to_dict()}) + "\n")
        return 2 if isinstance(exc, UsageError) else 1
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
