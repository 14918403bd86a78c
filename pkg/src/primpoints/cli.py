"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 a verification failed.
Errors go to stderr as one JSON line {"error": ..., "position": ...}.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from . import __version__
from .budget import ENV_VAR, BudgetExceeded
from .charsum import (
    MulCharacter,
    characters_of_order,
    jacobi_magnitude_law,
    jacobi_sum_direct,
    jacobi_sum_fast,
)
from .count import count_primitive_brute, primitive_via_moebius
from .fermat import (
    dwork_bound_check,
    main_term,
    primitive_count_fermat_charsum,
    primitive_count_fermat_exact,
    superelliptic_bound,
    theorem2_bound,
    theorem2_check,
)
from .field import DEFAULT_CAP, FieldError, field_for_q
from .hyperplane import (
    primitive_count_hyperplane_exact,
    primitive_count_hyperplane_expansion,
)
from .poly import FermatShape, PolyParseError, as_fermat_shape, parse_poly
from .report import CountReport, emit_report, fmt_real
from .sieve import (
    DELTA_TABLE,
    SieveConfig,
    sieve_config_for,
    sieve_criterion,
    sieve_lower_bound_check,
)
from .sphere import sphere_scan, sufficiency_threshold


class UsageError(Exception):
    def __init__(self, message: str, position=None):
        super().__init__(message)
        self.position = position


class VerificationFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _dump(obj) -> str:
    return json.dumps(obj)


def _report_out(args, report: CountReport | list[CountReport]) -> str:
    return emit_report(report, args.format, with_elapsed=not args.no_timing)


def _ctx(args, q=None):
    return field_for_q(args.q if q is None else q, cap=args.cap)


def _elem(ctx, value: int) -> int:
    """Integer arguments name field elements by encoding; reduce into range."""
    if ctx.n == 1:
        return value % ctx.q
    if not 0 <= value < ctx.q:
        raise UsageError(f"element encoding {value} is outside 0..{ctx.q - 1}")
    return value


def _verify(report: CountReport) -> None:
    if report.holds is False:
        raise VerificationFailed(f"bound violated: deviation {report.deviation} > {report.bound}")


# --- subcommands --------------------------------------------------------------------


def cmd_field_info(args) -> str:
    return _dump(_ctx(args).info())


def cmd_count(args) -> str:
    F = _ctx(args)
    f = parse_poly(args.poly, F, args.nvars)
    if f.nvars == 0:
        raise UsageError("polynomial has no variables")
    t0 = time.perf_counter()
    if args.method == "brute":
        count = count_primitive_brute(f)
    elif args.method == "moebius":
        count = primitive_via_moebius(f)
    else:
        shape = as_fermat_shape(f)
        if shape is None:
            raise UsageError(f"method {args.method} needs a Fermat shape a_1 x_1^d_1 + ... - b")
        if args.method == "fermat":
            count = primitive_count_fermat_exact(F, shape)
        else:
            count = primitive_count_fermat_charsum(F, shape)
    rep = CountReport(
        q=F.q,
        p=F.p,
        n=F.n,
        poly=f.to_text(),
        method=args.method,
        count=count,
        main_term=main_term(F.q, f.nvars),
        elapsed=time.perf_counter() - t0,
    )
    return _report_out(args, rep)


def cmd_bound_fermat(args) -> str:
    d = args.d
    if args.bound_only:
        return _dump({"q": args.q, "d": d, "b_is_zero": args.b == 0, "bound": fmt_real(theorem2_bound(args.q, d, args.b == 0))})
    F = _ctx(args)
    a = args.a if args.a is not None else [1] * len(d)
    if len(a) != len(d):
        raise UsageError("--a and --d need the same length")
    shape = FermatShape(tuple(_elem(F, x) for x in a), tuple(d), _elem(F, args.b))
    if any(x == 0 for x in shape.a):
        raise UsageError("coefficients must be nonzero")
    rep = theorem2_check(F, shape)
    out = _report_out(args, rep)
    _verify(rep)
    return out


def cmd_bound_dwork(args) -> str:
    F = _ctx(args)
    f = parse_poly(args.poly, F, args.nvars)
    rep = dwork_bound_check(F, f, max_extension=args.max_extension)
    out = _report_out(args, rep)
    _verify(rep)
    return out


def cmd_bound_superelliptic(args) -> str:
    val = superelliptic_bound(args.q, args.n, args.d, args.s)
    return _dump({"q": args.q, "n": args.n, "d": args.d, "s": args.s, "bound": fmt_real(float(val))})


def cmd_hyperplane(args) -> str:
    F = _ctx(args)
    a = [_elem(F, x) for x in args.a]
    b = _elem(F, args.b)
    shape = FermatShape(tuple(a), (1,) * len(a), b)
    t0 = time.perf_counter()
    if args.method == "exact":
        count = primitive_count_hyperplane_exact(F, a, b)
    elif args.method == "expansion":
        count = primitive_count_hyperplane_expansion(F, a, b)
    else:
        count = count_primitive_brute(shape.to_poly(F))
    rep = CountReport(
        q=F.q,
        p=F.p,
        n=F.n,
        poly=shape.to_poly(F).to_text(),
        method=f"hyperplane-{args.method}",
        count=count,
        main_term=main_term(F.q, len(a)),
        elapsed=time.perf_counter() - t0,
    )
    out = _report_out(args, rep)
    if args.verify:
        brute = count_primitive_brute(shape.to_poly(F))
        if brute != count:
            raise VerificationFailed(f"{args.method} count {count} disagrees with brute force {brute}")
    return out


def cmd_jacobi(args) -> str:
    F = _ctx(args)
    b = _elem(F, args.b)
    coeffs = [_elem(F, x) for x in args.coeffs] if args.coeffs is not None else None
    if coeffs is not None and len(coeffs) != len(args.orders):
        raise UsageError("--coeffs and --orders need the same length")
    for r in args.orders:
        if r < 1 or (F.q - 1) % r:
            raise UsageError(f"order {r} does not divide q-1 = {F.q - 1}")
    pools = [characters_of_order(F, r) for r in args.orders]
    rows = []
    failures = 0
    from itertools import product

    for combo in product(*pools):
        chars: list[MulCharacter] = list(combo)
        direct = jacobi_sum_direct(chars, b, coeffs)
        fast = jacobi_sum_fast(chars, b, coeffs) if b != 0 else direct
        law = jacobi_magnitude_law(chars) if b != 0 else None
        agree = abs(direct - fast) <= 1e-6 * F.q
        if law is not None:
            agree = agree and abs(abs(direct) - law) <= 1e-6 * F.q
        failures += not agree
        rows.append(
            {
                "indices": [c.index for c in chars],
                "re": fmt_real(direct.real),
                "im": fmt_real(direct.imag),
                "abs": fmt_real(abs(direct)),
                "law": fmt_real(law),
                "consistent": bool(agree),
            }
        )
        if len(rows) >= args.limit:
            break
    out = _dump({"q": F.q, "b": b, "orders": args.orders, "sums": rows})
    if failures:
        raise VerificationFailed(f"{failures} Jacobi sums disagree with the fast path or magnitude law")
    return out


def cmd_sieve(args) -> str:
    if args.table:
        rows = []
        for r in DELTA_TABLE:
            rows.append(
                {
                    "max_w": r.max_w,
                    "primes": list(r.primes),
                    "delta": fmt_real(r.delta),
                    "listed_delta": r.listed_delta,
                    "w_ell": r.w_ell,
                    "interval": list(r.interval),
                    "criterion_at_lower_end": r.criterion_at(int(r.interval[0]) + 1),
                }
            )
        return _dump(rows)
    if args.q is None or args.d is None or args.ell is None:
        raise UsageError("sieve needs --q, --d and --ell (or --table)")
    if len(args.d) != len(args.ell):
        raise UsageError("--d and --ell need the same length")
    if args.primes is None:
        config = sieve_config_for(args.q, args.d, args.ell)
    else:
        config = SieveConfig(d=args.d, ell=args.ell, primes=[args.primes] * len(args.d), q=args.q)
    delta = config.delta
    result = {
        "q": args.q,
        "d": list(config.d),
        "ell": list(config.ell),
        "primes": [list(ps) for ps in config.primes],
        "t_total": config.t_total,
        "delta": fmt_real(delta),
        "criterion": sieve_criterion(args.q, config.d, config.ell, config.t_total, delta) if delta > 0 else None,
    }
    if args.a is not None:
        F = _ctx(args)
        if len(args.a) != len(args.d):
            raise UsageError("--a and --d need the same length")
        rep = sieve_lower_bound_check(F, config, [_elem(F, x) for x in args.a], _elem(F, args.b))
        result["lower_bound_check"] = rep.as_dict(with_elapsed=not args.no_timing)
        out = _dump(result)
        if not rep.holds:
            raise VerificationFailed("sieve inequality failed")
        return out
    return _dump(result)


def cmd_scan_sphere(args) -> str:
    records: list = []
    exceptions = sphere_scan(args.max, args.jobs, args.checkpoint, cap=args.cap, records=records)
    if args.format == "json":
        out = _dump({"max_q": args.max, "scanned": len(records), "exceptions": exceptions})
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["q", "has_primitive", "witness"])
        for r in records:
            wit = "" if r["witness"] is None else ";".join(str(x) for x in r["witness"])
            w.writerow([r["q"], str(r["has_primitive"]).lower(), wit])
        out = buf.getvalue().rstrip("\n")
    if args.expect is not None and exceptions != args.expect:
        sys.stdout.write(out + "\n")
        raise VerificationFailed(f"exceptional list {exceptions} differs from expected {args.expect}")
    return out


def cmd_threshold_sphere(args) -> str:
    t0 = time.perf_counter()
    value = sufficiency_threshold()
    return _dump({"threshold": fmt_real(value), "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3)})


# --- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest field size to tabulate")
    common.add_argument("--budget", type=float, default=None, help=f"work budget (overrides {ENV_VAR})")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--no-timing", action="store_true", help="omit elapsed_ms for reproducible output")

    p = _Parser(prog="primpoints", description="Primitive points on hypersurfaces over finite fields.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fld = sub.add_parser("field", help="field tables")
    fsub = fld.add_subparsers(dest="what", required=True, parser_class=_Parser)
    fi = fsub.add_parser("info", parents=[common], help="modulus, generator and q-1 factorization")
    fi.add_argument("--q", type=int, required=True)
    fi.set_defaults(func=cmd_field_info)

    c = sub.add_parser("count", parents=[common], help="count primitive zeros of a polynomial")
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--poly", required=True)
    c.add_argument("--nvars", type=int, default=None)
    c.add_argument("--method", choices=("brute", "moebius", "fermat", "charsum"), default="brute")
    c.set_defaults(func=cmd_count)

    b = sub.add_parser("bound", help="evaluate and check deviation bounds")
    bsub = b.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    bf = bsub.add_parser("fermat", parents=[common], help="Fermat hypersurface bound")
    bf.add_argument("--q", type=int, required=True)
    bf.add_argument("--d", type=_int_list, required=True)
    bf.add_argument("--a", type=_int_list, default=None)
    bf.add_argument("--b", type=int, default=1)
    bf.add_argument("--bound-only", action="store_true", help="skip the exact count")
    bf.set_defaults(func=cmd_bound_fermat)
    bd = bsub.add_parser("dwork", parents=[common], help="bound for Dwork-regular polynomials")
    bd.add_argument("--q", type=int, required=True)
    bd.add_argument("--poly", required=True)
    bd.add_argument("--nvars", type=int, default=None)
    bd.add_argument("--max-extension", type=int, default=3)
    bd.set_defaults(func=cmd_bound_dwork)
    bs = bsub.add_parser("superelliptic", parents=[common], help="superelliptic bound value")
    bs.add_argument("--q", type=int, required=True)
    bs.add_argument("--n", type=int, required=True)
    bs.add_argument("--d", type=int, required=True)
    bs.add_argument("--s", type=int, required=True)
    bs.set_defaults(func=cmd_bound_superelliptic)

    h = sub.add_parser("hyperplane", parents=[common], help="sum a_i x_i = b over a Fermat prime")
    h.add_argument("--q", type=int, required=True)
    h.add_argument("--a", type=_int_list, required=True)
    h.add_argument("--b", type=int, default=0)
    h.add_argument("--method", choices=("exact", "expansion", "brute"), default="exact")
    h.add_argument("--verify", action="store_true", help="compare against brute force")
    h.set_defaults(func=cmd_hyperplane)

    j = sub.add_parser("jacobi", parents=[common], help="Jacobi sums for characters of given orders")
    j.add_argument("--q", type=int, required=True)
    j.add_argument("--orders", type=_int_list, required=True)
    j.add_argument("--b", type=int, default=1)
    j.add_argument("--coeffs", type=_int_list, default=None)
    j.add_argument("--limit", type=int, default=1000)
    j.set_defaults(func=cmd_jacobi)

    s = sub.add_parser("sieve", parents=[common], help="prime sieve parameters and criterion")
    s.add_argument("--q", type=int)
    s.add_argument("--d", type=_int_list)
    s.add_argument("--ell", type=_int_list)
    s.add_argument("--primes", type=_int_list, default=None, help="sieving primes, same for every coordinate")
    s.add_argument("--a", type=_int_list, default=None, help="also brute-check the sieve inequality")
    s.add_argument("--b", type=int, default=1)
    s.add_argument("--table", action="store_true", help="print the sphere sieving table")
    s.set_defaults(func=cmd_sieve)

    sc = sub.add_parser("scan", help="exhaustive scans")
    scsub = sc.add_subparsers(dest="target", required=True, parser_class=_Parser)
    ss = scsub.add_parser("sphere", parents=[common], help="primitive points on x^2+y^2+z^2=1")
    ss.add_argument("--max", type=int, required=True)
    ss.add_argument("--jobs", type=int, default=None)
    ss.add_argument("--checkpoint", default=None)
    ss.add_argument("--expect", type=_int_list, default=None)
    ss.set_defaults(func=cmd_scan_sphere)

    th = sub.add_parser("threshold", help="analytic thresholds")
    thsub = th.add_subparsers(dest="target", required=True, parser_class=_Parser)
    ts = thsub.add_parser("sphere", parents=[common], help="sufficiency threshold for the sphere")
    ts.set_defaults(func=cmd_threshold_sphere)
    return p


def _error(message: str, position=None) -> None:
    sys.stderr.write(json.dumps({"error": message, "position": position}) + "\n")


def main(argv=None) -> int:
    saved = os.environ.get(ENV_VAR)
    try:
        return _run(argv)
    finally:
        if saved is None:
            os.environ.pop(ENV_VAR, None)
        else:
            os.environ[ENV_VAR] = saved


def _run(argv) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "budget", None) is not None:
            os.environ[ENV_VAR] = str(int(args.budget))
        out = args.func(args)
    except PolyParseError as e:
        _error(e.message, e.position)
        return 1
    except UsageError as e:
        _error(str(e), e.position)
        return 1
    except VerificationFailed as e:
        _error(str(e))
        return 2
    except ArithmeticError as e:
        _error(str(e))
        return 2
    except (FieldError, BudgetExceeded, ValueError, OSError) as e:
        _error(str(e))
        return 1
    sys.stdout.write(out.rstrip("\n") + "\n")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
