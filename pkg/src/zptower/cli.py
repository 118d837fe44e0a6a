"""Command-line front end: ``zptower <command> --spec tower.json ...``.

Exit codes: 0 success, 2 insufficient precision, 3 a check failed, 4 bad spec
or arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import CheckFailed, SpecError, TowerError
from .ff import poly_str
from .iwasawa import SCAN_HEADER, scan_family, verify_theorem
from .lfun import layer_zeta, newton_polygon, specialize, tadic_l
from .tower import TowerSpec, frobenius_values, load_spec


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SpecError(message)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(args, name: str, text: str) -> None:
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text, newline="\n")
        print(out / name)
    else:
        sys.stdout.write(text)


def _spec(args) -> TowerSpec:
    spec = load_spec(args.spec)
    if args.prec_a is not None or args.prec_bs is not None or args.nmax is not None:
        spec = spec.with_precision(a=args.prec_a, b_s=args.prec_bs, n_max=args.nmax)
    return spec


def _slopes(npg):
    return [[s.numerator, s.denominator] for s in npg.slopes]


def cmd_points(args) -> int:
    spec = _spec(args)
    D = spec.precision.D if args.max_degree is None else args.max_degree
    rows = ["# point\tdegree\tfrobenius"]
    if D > 0:
        for pt, v in frobenius_values(spec, D):
            rows.append(f"{poly_str(spec.ctx, pt.minpoly)}\t{pt.degree}\t{v.value}")
    _emit(args, "points.tsv", "\n".join(rows) + "\n")
    return 0


def cmd_lfun(args) -> int:
    spec = _spec(args)
    cl = specialize(tadic_l(spec), args.n)
    data = cl.to_dict()
    data["tower"] = spec.label()
    if cl.degree is not None:
        npg = newton_polygon(cl)
        data["slopes"] = _slopes(npg)
        _emit(args, f"lfun_n{args.n}.json", _dump(data))
        if args.out:
            _emit(args, f"newton_n{args.n}.tsv", npg.to_tsv())
    else:
        data["note"] = "trivial character: truncated zeta series of U"
        _emit(args, f"lfun_n{args.n}.json", _dump(data))
    return 0


def cmd_tadic(args) -> int:
    spec = _spec(args)
    s = tadic_l(spec).series
    data = {"tower": spec.label(), "p": s.p, "a": s.a, "b_T": s.b_T, "b_s": s.b_s,
            "terms": [list(t) for t in s.terms]}
    _emit(args, "tadic.json", _dump(data))
    return 0


def cmd_zeta(args) -> int:
    spec = _spec(args)
    z = layer_zeta(spec, args.n)
    h = z.at_one()
    data = {"tower": spec.label(), "n": args.n, "p": z.p, "a": z.a, "degree": z.degree,
            "genus": z.degree // 2, "coefficients": z.to_list(),
            "v_h": None if h.is_zero() else h.valuation()}
    if args.n > 0:
        npg = newton_polygon(z)
        data["slopes"] = _slopes(npg)
    _emit(args, f"zeta_n{args.n}.json", _dump(data))
    if args.out and args.n > 0:
        _emit(args, f"zeta_newton_n{args.n}.tsv", npg.to_tsv())
    return 0


def cmd_verify(args) -> int:
    spec = _spec(args)
    report = verify_theorem(spec, fault=args.inject_fault)
    _emit(args, "report.json", report.to_json())
    print(report.summary(), file=sys.stderr)
    if not report.ok:
        raise CheckFailed("verification failed: " + ", ".join(report.failures))
    return 0


def _family(text: str):
    path = Path(text)
    if not text.lstrip().startswith("[") and path.exists():
        text = path.read_text()
    try:
        family = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"family JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(family, list):
        raise SpecError("family must be a JSON list of coefficient lists")
    return family


def cmd_scan(args) -> int:
    spec = _spec(args)
    rows = scan_family(spec, _family(args.family), a=args.prec_a)
    for row in rows:
        if row.status.startswith("skipped"):
            print(f"{row.f}: {row.status}", file=sys.stderr)
    _emit(args, "scan.tsv", "\n".join([SCAN_HEADER] + [r.tsv() for r in rows]) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zptower", description="L-functions and Iwasawa invariants of Z_p-towers over P^1.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--spec", required=True, help="tower spec (JSON file or inline JSON)")
    common.add_argument("--out", help="output directory (default: stdout)")
    common.add_argument("--prec-a", type=int, help="p-adic precision a")
    common.add_argument("--prec-bs", type=int, help="s-degree truncation b_s")
    common.add_argument("--nmax", type=int, help="highest level n")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("points", parents=[common], help="closed points and Frobenius values")
    p.add_argument("--max-degree", type=int, help="largest point degree D (default b_s)")
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("lfun", parents=[common], help="L(chi_n, s) and its Newton polygon")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_lfun)

    p = sub.add_parser("tadic", parents=[common], help="coefficients of L_rho(T, s)")
    p.set_defaults(func=cmd_tadic)

    p = sub.add_parser("zeta", parents=[common], help="numerator P(X_n, s) of the layer zeta function")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("verify", parents=[common], help="check the valuation formula level by level")
    p.add_argument("--inject-fault", action="store_true", help="corrupt L_rho(T, 1) (negative control)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", parents=[common], help="census of (mu, lambda) over a family of f")
    p.add_argument("--family", required=True,
                   help="JSON list of coefficient lists; an entry [lo, hi] ranges over lo..hi")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except TowerError as exc:
        print(f"zptower: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
