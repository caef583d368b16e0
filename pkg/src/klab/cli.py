"""Command-line front end: ``klab <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure (a tolerance that cannot be met).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from . import holproj, kronecker, verify
from .arithlib import GroupSpec, harmonic, mobius, sigma
from .numerics import PRECISION_DPS, DomainError, TruncationError, fmt, precision
from .qseries import HalfPlanePoint, QExpansion, delta_qexp, g12_qexp, qexp_mul, renormalize_weight
from .specfun import exp_int_e1, kbessel, whittaker_star

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_TOL = "1e-10"
QEXP_FORMS = ("delta", "g12", "delta2", "delta_g12")
FORM_ALIASES = {"delta-g12": "delta_g12", "deltag12": "delta_g12"}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    precision: str = "extended"
    default_tol: object = DEFAULT_TOL
    output_format: str = "json"

    def __post_init__(self):
        if self.precision not in PRECISION_DPS:
            raise UsageError(f"unknown precision {self.precision!r}")
        try:
            tol = mp.mpf(self.default_tol)
        except (ValueError, TypeError):
            raise UsageError(f"tolerance must be a number, got {self.default_tol!r}") from None
        if not tol > 0:
            raise UsageError("tolerance must be positive")


class Table:
    """Output that can also be rendered as CSV."""

    def __init__(self, payload: dict, header: list, rows: list):
        self.payload = payload
        self.header = header
        self.rows = rows


def _form_name(s: str) -> str:
    name = FORM_ALIASES.get(s.lower(), s.lower())
    if name not in QEXP_FORMS:
        raise argparse.ArgumentTypeError(f"unknown form {s!r}; choose from {', '.join(QEXP_FORMS)}")
    return name


def _cusp24_name(s: str) -> str:
    name = _form_name(s)
    if name not in holproj.FORMS:
        raise argparse.ArgumentTypeError(f"form must be one of delta2, delta_g12; got {s!r}")
    return name


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _nonneg_int(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {s}")
    return v


def _real(x) -> str:
    return fmt(x)


def _approx(a) -> dict:
    v, err = a
    if isinstance(v, mp.mpc):
        return {"re": _real(v.real), "im": _real(v.imag), "error_bound": _real(err)}
    return {"value": _real(v), "error_bound": _real(err)}


def _complex(v) -> dict:
    v = mp.mpc(v)
    return {"re": _real(v.real), "im": _real(v.imag)}


def _build_form(name: str, N: int) -> QExpansion:
    if name == "delta":
        return delta_qexp(N)
    if name == "g12":
        return g12_qexp(N)
    d = delta_qexp(N)
    return qexp_mul(d, d) if name == "delta2" else qexp_mul(d, g12_qexp(N))


# command handlers: (args, cfg) -> dict | Table


def cmd_qexp(args, cfg):
    f = _build_form(args.form, args.terms)
    payload = {"form": args.form, **f.to_json()}
    rows = [[n, c if isinstance(c, (int, Fraction)) else fmt(c)] for n, c in enumerate(f.coeffs)]
    return Table(payload, ["n", "coeff"], rows)


def cmd_arith(args, cfg):
    if args.func == "sigma":
        return {"function": "sigma", "l": args.l, "n": args.n, "value": str(sigma(args.l, args.n))}
    if args.func == "mobius":
        return {"function": "mobius", "n": args.n, "value": str(mobius(args.n))}
    return {"function": "harmonic", "n": args.n, "value": str(harmonic(args.n))}


def cmd_specfun(args, cfg):
    if args.func == "e1":
        return {"function": "e1", "x": args.x, "value": _real(exp_int_e1(args.x))}
    if args.func == "kbessel":
        return {"function": "kbessel", "s": args.s, "y": args.y, "value": _real(kbessel(args.s, args.y))}
    z = HalfPlanePoint(args.x, args.y)
    return {"function": "wstar", "n": args.n, "x": args.x, "y": args.y, "value": _complex(whittaker_star(args.n, z))}


def _group(args) -> GroupSpec:
    if args.group == "sl2z":
        if args.level not in (None, 1):
            raise UsageError("--level applies only to --group gamma0")
        return GroupSpec.full_modular()
    if args.level is None:
        raise UsageError("--group gamma0 needs --level N")
    return GroupSpec.gamma0(args.level)


def _k1_data(group: GroupSpec, N_max: int):
    if group.kind == "full_modular":
        return kronecker.k1_full_modular(N_max), None
    return kronecker.k1_gamma0_squarefree(group.level, N_max)


def cmd_k1(args, cfg):
    group = _group(args)
    if args.action == "coeffs":
        k1, additive = _k1_data(group, args.max_n)
        payload = k1.to_json(additive)
        rows = [[n, fmt(v)] for n, v in enumerate(k1.k_table, 1)]
        return Table(payload, ["n", "k"], rows)

    z = HalfPlanePoint(args.x, args.y)
    tol = mp.mpf(cfg.default_tol)
    if args.max_n is not None:
        k1, additive = _k1_data(group, args.max_n)
        val = kronecker.k1_eval(k1, z, tol)
    else:
        N = 32
        while True:
            k1, additive = _k1_data(group, N)
            try:
                val = kronecker.k1_eval(k1, z, tol)
                break
            except TruncationError as exc:
                N = exc.required
    out = {"group": group.to_json(), "x": args.x, "y": args.y, "n_max": k1.n_max, **_approx(val)}
    out["gamma0_constant"] = None if additive is None else fmt(additive)
    return out


def cmd_lseries(args, cfg):
    # weight-24 forms are rescaled by n^-11 so that a_n grows at most linearly
    raw = _build_form(args.form, args.terms)
    f = renormalize_weight(raw, 2) if raw.weight not in (None, 2) else raw
    k1, _ = _k1_data(GroupSpec.full_modular(), args.terms + args.m + 1)
    fn = kronecker.l_plusplus_partial if args.kind == "plusplus" else kronecker.l_minus_partial
    val = fn(f, k1, args.m, args.s, args.terms)
    return {"series": args.kind, "form": args.form, "m": args.m, "s": args.s, "terms": args.terms, **_approx(val)}


def cmd_holproj(args, cfg):
    tol = args.tol if args.tol is not None else cfg.default_tol
    if args.action == "dm":
        p = holproj.project_named(args.form, max(args.m, 2), tol)
        return {
            "form": args.form,
            "m": args.m,
            "tol": fmt(mp.mpf(tol)),
            "d": fmt(p.d[args.m - 1]),
            "tail_error": fmt(p.tail_error[args.m - 1]),
        }
    if args.action == "project":
        p = holproj.project_named(args.form, args.m_max, tol)
        rows = [[m, fmt(d), fmt(t)] for m, (d, t) in enumerate(zip(p.d, p.tail_error), 1)]
        return Table(holproj.projection_json(p), ["m", "d", "tail_error"], rows)
    p = holproj.project_named(args.form, max(args.m_fit, holproj.DEFAULT_M_FIT), tol)
    dec = holproj.decompose(p, args.m_fit)
    return {"form": args.form, "m_fit": args.m_fit, "tol": fmt(mp.mpf(tol)), **dec.to_json()}


def cmd_verify(args, cfg):
    checks = verify.run(args.suite)
    for c in checks:
        print(c.line(), file=sys.stderr)
    failed = sum(not c.passed for c in checks)
    return {
        "suite": args.suite,
        "precision": cfg.precision,
        "passed": len(checks) - failed,
        "failed": failed,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
    }


def _global_options(p, default=None, with_tol=True):
    p.add_argument("--precision", choices=sorted(PRECISION_DPS), default=default,
                   help="working precision (env KLAB_PRECISION)")
    if with_tol:
        p.add_argument("--tol", dest="global_tol", default=default,
                       help="default tolerance (env KLAB_TOL, default 1e-10)")
    p.add_argument("--format", choices=("json", "csv", "plain"), dest="output_format",
                   default=default if default is not None else "json")


def _leaf(sub, name, with_tol=True, **kw):
    # global options are also accepted after the subcommand
    p = sub.add_parser(name, **kw)
    _global_options(p, argparse.SUPPRESS, with_tol)
    return p


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="klab", description="Fourier data of the Kronecker limit formula.")
    _global_options(p)
    sub = p.add_subparsers(dest="command", required=True)

    q = _leaf(sub, "qexp", help="exact q-expansion coefficients")
    q.add_argument("form", type=_form_name, help="delta, g12, delta2 or delta_g12")
    q.add_argument("--terms", type=_positive_int, required=True, help="truncation order N")
    q.set_defaults(handler=cmd_qexp)

    a = sub.add_parser("arith", help="arithmetic functions")
    asub = a.add_subparsers(dest="func", required=True)
    s = _leaf(asub, "sigma")
    s.add_argument("l", type=_nonneg_int)
    s.add_argument("n", type=_positive_int)
    _leaf(asub, "mobius").add_argument("n", type=_positive_int)
    _leaf(asub, "harmonic").add_argument("n", type=_nonneg_int)
    a.set_defaults(handler=cmd_arith)

    sp = sub.add_parser("specfun", help="special functions")
    ssub = sp.add_subparsers(dest="func", required=True)
    _leaf(ssub, "e1").add_argument("x")
    kb = _leaf(ssub, "kbessel")
    kb.add_argument("s")
    kb.add_argument("y")
    ws = _leaf(ssub, "wstar")
    ws.add_argument("n", type=_positive_int)
    ws.add_argument("--x", default="0")
    ws.add_argument("--y", required=True)
    sp.set_defaults(handler=cmd_specfun)

    k = sub.add_parser("k1", help="first-order Kronecker limit data")
    ksub = k.add_subparsers(dest="action", required=True)
    for name in ("coeffs", "eval"):
        kp = _leaf(ksub, name)
        kp.add_argument("--group", choices=("sl2z", "gamma0"), default="sl2z")
        kp.add_argument("--level", type=_positive_int)
        if name == "coeffs":
            kp.add_argument("--max-n", type=_positive_int, required=True)
        else:
            kp.add_argument("--max-n", type=_positive_int, help="fixed table size; default chosen from --tol")
            kp.add_argument("--x", default="0")
            kp.add_argument("--y", required=True)
    k.set_defaults(handler=cmd_k1)

    ls = _leaf(sub, "lseries", help="partial sums of L++_m(s) or L-_m(s) for s > 3")
    ls.add_argument("kind", choices=("plusplus", "minus"))
    ls.add_argument("--form", type=_form_name, required=True, help="weight-24 forms are rescaled by n^-11")
    ls.add_argument("--m", type=_positive_int, required=True)
    ls.add_argument("--s", default="4")
    ls.add_argument("--terms", type=_positive_int, default=100)
    ls.set_defaults(handler=cmd_lseries)

    h = sub.add_parser("holproj", help="holomorphic projection of f K_1 for f in S_24")
    hsub = h.add_subparsers(dest="action", required=True)
    for name in ("dm", "project", "decompose"):
        hp = _leaf(hsub, name, with_tol=False)
        hp.add_argument("--form", type=_cusp24_name, required=True, help="delta2 or delta_g12")
        hp.add_argument("--tol")
        if name == "dm":
            hp.add_argument("--m", type=_positive_int, required=True)
        elif name == "project":
            hp.add_argument("--m-max", type=_positive_int, default=holproj.DEFAULT_M_FIT)
        else:
            hp.add_argument("--m-fit", type=_positive_int, default=holproj.DEFAULT_M_FIT)
    h.set_defaults(handler=cmd_holproj)

    v = _leaf(sub, "verify", help="run a verification suite")
    v.add_argument("suite", choices=("all", *verify.SUITES))
    v.set_defaults(handler=cmd_verify)
    return p


def _render(result, fmt_name: str) -> str:
    if fmt_name == "csv":
        if not isinstance(result, Table):
            raise UsageError("csv output is available for coefficient tables only (qexp, k1 coeffs, holproj project)")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(result.header)
        w.writerows(result.rows)
        return buf.getvalue()
    payload = result.payload if isinstance(result, Table) else result
    if fmt_name == "plain":
        return "".join(f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}\n" for k, v in payload.items())
    return json.dumps(payload, indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = RunConfig(
            precision=args.precision or os.environ.get("KLAB_PRECISION") or "extended",
            default_tol=args.global_tol or os.environ.get("KLAB_TOL") or DEFAULT_TOL,
            output_format=args.output_format,
        )
        if getattr(args, "tol", None) is not None:
            RunConfig(default_tol=args.tol)
        with precision(cfg.precision), mp.workdps(PRECISION_DPS[cfg.precision]):
            result = args.handler(args, cfg)
            text = _render(result, cfg.output_format)
    except UsageError as exc:
        print(f"klab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TruncationError, ArithmeticError) as exc:
        print(f"klab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, ValueError) as exc:
        print(f"klab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    if args.command == "verify" and result["failed"]:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
