"""Command-line interface.

Every command prints one report, JSON with ``--json`` (sorted keys, so the
bytes only depend on the arguments) or ``key: value`` text otherwise.

Exit status: 0 on success, 1 on invalid input, 2 when ``--strict`` is given
and the report lists issues (precision exhausted, kernel not closed, oracle
mismatch).  ``--strict`` never changes the report itself.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .algebra.field import FieldCtx
from .algebra.grammar import PolyParseError, parse_poly
from .algebra.poly import InexactDivisionError, Poly
from .algebra.series import LaurentSeries, PrecisionError, hensel_root
from .automata import (
    MIN_WINDOW,
    christol_digits,
    dfao_eval,
    dfao_from_kernel,
    kernel_enumerate,
    paperfold,
    required_prefix,
    to_msd,
)
from .contfrac import approx_exponent_estimate, cf_expand, cf_report, leading_coeffs, split_top_level
from .hyperquad import (
    BootstrapStall,
    FamilyParams,
    bootstrap_expand,
    closed_form,
    exponent_degrees,
    root_residual,
    series_for_residual,
    spec_from_json,
    spec_to_json,
    theta_constructors,
    u_params,
    u_recursion_generate,
)
from .io import FormatError, read_morph, read_seq, read_series, read_spec
from .sampling import GENERATOR, oracle_sweep
from .substitution import (
    counterexample_report,
    frequency_check,
    incidence_matrix,
    ln_mn,
    nonautomatic_evidence,
    quartic_morphism,
    perron_eigenvalue,
    quartic_expand,
    w_sequence,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_STRICT = 2


class UsageError(Exception):
    """Invalid command-line input (exit status 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# -- shared option groups -----------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--json", action="store_true", help="print the report as JSON")
    parent.add_argument("--strict", action="store_true", help="exit 2 when the report lists issues")
    parent.add_argument("--seed", type=int, default=0, help="seed for sampled sweeps (default 0)")
    return parent


def _field() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--p", type=int, default=3, help="characteristic (default 3)")
    parent.add_argument("--s", type=int, default=1, help="extension degree, q = p^s (default 1)")
    parent.add_argument("--modulus", default=None, help="monic modulus coefficients, highest first, e.g. 1,0,1")
    return parent


def _ctx(args) -> FieldCtx:
    modulus = None
    if args.modulus:
        try:
            modulus = tuple(int(c) for c in args.modulus.split(","))
        except ValueError:
            raise UsageError(f"--modulus must be comma-separated integers, got {args.modulus!r}") from None
    return FieldCtx(args.p, args.s, modulus)


def _field_json(args) -> dict:
    out = {"p": args.p, "s": args.s}
    if args.modulus:
        out["modulus"] = [int(c) for c in args.modulus.split(",")]
    return out


def _prefix_list(values) -> list[str]:
    out = []
    for v in values or []:
        out.extend(chunk.strip() for chunk in split_top_level(v) if chunk.strip())
    return out


def _estimate_json(degrees) -> dict | None:
    degrees = [d for d in degrees if d > 0]
    if len(degrees) < 4:
        return None
    est = approx_exponent_estimate(degrees)
    return {
        "value": float(est.value),
        "exact": f"{est.value.numerator}/{est.value.denominator}",
        "window": list(est.window),
        "argmax": est.argmax,
    }


# -- commands -------------------------------------------------------------------------------------


def cmd_family(args) -> dict:
    data = dict(_field_json(args), r=args.r, family=args.family, A=_prefix_list(args.A))
    if not data["A"]:
        raise UsageError("--A needs at least one partial quotient")
    if args.l is not None:
        data["l"] = args.l
    for name in ("eps", "eps1", "eps2"):
        if getattr(args, name) is not None:
            data[name] = getattr(args, name)
    data["relaxed"] = args.relaxed
    spec, params = spec_from_json(data)
    cf = closed_form(spec, params, args.n, relaxed=args.relaxed)
    out = {"command": "family", "spec": spec_to_json(spec, params), "n": args.n}
    out.update(cf_report(cf))
    issues = []
    if args.check:
        try:
            boot = bootstrap_expand(spec, args.n)
            agrees = boot.pqs == cf.pqs
            out["bootstrap"] = {"agrees": agrees, "certified": boot.certified}
            if not agrees:
                issues.append("bootstrap expansion disagrees with the closed form")
        except BootstrapStall as exc:
            out["bootstrap"] = {"agrees": False, "certified": 0}
            issues.append(f"bootstrap stalled: {exc}")
    out["issues"] = issues
    return out


def cmd_expand(args) -> dict:
    issues = []
    if (args.spec is None) == (args.input is None):
        raise UsageError("give exactly one of --spec FILE.spec or --input FILE.ser")
    if args.spec is not None:
        spec, params = read_spec(args.spec)
        cf = bootstrap_expand(spec, args.n, method=args.method)
        out = {"command": "expand", "source": "spec", "spec": spec_to_json(spec, params), "n": args.n}
        out.update(cf_report(cf))
        out["reason"] = cf.reason
        if params is not None:
            ref = closed_form(spec, params, args.n)
            agrees = ref.pqs == cf.pqs
            out["closed_form_agrees"] = agrees
            if not agrees:
                issues.append("bootstrap expansion disagrees with the closed form")
        res = root_residual(spec, series_for_residual(cf, args.residual_target))
        out["residual"] = {
            "valuation": res.valuation,
            "exact_valuation": res.exact_valuation,
            "precision": res.precision,
            "margin": res.margin,
            "threshold": res.threshold,
            "certified": res.certified,
        }
        if not res.certified:
            issues.append("residual of the hyperquadratic equation is not small enough")
    else:
        f = read_series(args.input)
        cf = cf_expand(f, args.n)
        out = {"command": "expand", "source": "series", "n": args.n}
        out.update(cf_report(cf))
        out["reason"] = cf.reason
    if cf.certified < args.n:
        issues.append(f"precision exhausted after {cf.certified} of {args.n} partial quotients")
    out["issues"] = issues
    return out


def cmd_theta(args) -> dict:
    ctx = _ctx(args)
    r = args.r or ctx.p
    series, cf = theta_constructors(args.which, ctx, r, args.n)
    which = "Theta1" if args.which in ("1", "Theta1") else "Theta2"
    out = {"command": "theta", "which": which, "p": ctx.p, "r": r, "n": args.n}
    out["cf_of"] = which if which == "Theta1" else "1/Theta2"
    out.update(cf_report(cf))
    out["estimate"] = _estimate_json(exponent_degrees(cf))
    issues = []
    if which == "Theta1":
        expected = [r**i for i in range(args.n)]
        out["degrees_match"] = cf.degrees == expected
        if not out["degrees_match"]:
            issues.append("degrees differ from 1, r, r^2, ...")
    else:
        u = [int(x.value) for x in leading_coeffs(cf)]
        fold = [int(x) for x in paperfold(len(u), ctx=ctx).terms]
        params = FamilyParams("F3", eps1=ctx.element(-1), eps2=ctx.element(-1))
        rec = u_recursion_generate(1, [ctx.element(1)], *u_params(params), r, len(u))
        out["paperfold_agrees"] = u == fold
        out["u_recursion_agrees"] = u == [int(x.value) for x in rec]
        if not (out["paperfold_agrees"] and out["u_recursion_agrees"]):
            issues.append("leading coefficients disagree with the paperfolding oracle")
    out["issues"] = issues
    return out


def _kernel_block(report, v, args) -> dict:
    out = report.to_json()
    if args.dfao and report.closed:
        d = dfao_from_kernel(report, v, window=args.window)
        if args.msd:
            d = to_msd(d)
        out["dfao"] = d.to_json()
        start = 1 if v.start == 1 else 0
        checked = range(max(start, 1), v.last_index + 1)
        out["dfao_mismatches"] = sum(1 for n in checked if dfao_eval(d, n) != v.at(n))
    return out


def cmd_kernel(args) -> dict:
    alphabet = None
    if args.alphabet:
        alphabet = tuple(int(a) if a.strip().lstrip("-").isdigit() else a.strip() for a in args.alphabet.split(","))
    v = read_seq(args.input, alphabet)
    report = kernel_enumerate(v, args.k, args.depth, args.skip, args.max_classes, args.window)
    out = {"command": "kernel", "input": str(args.input), "terms": len(v)}
    out.update(_kernel_block(report, v, args))
    out["issues"] = [] if report.closed else ["kernel did not close within the bounds"]
    return out


def _quadratic_series(ctx: FieldCtx, n: int) -> LaurentSeries:
    """Root of T X^2 = T + 1 near 1, i.e. X^2 = 1 + 1/T."""
    if ctx.p == 2:
        raise UsageError("the quadratic source needs odd characteristic")
    T = Poly.T(ctx)
    coeffs = {2: T, 0: -(T + Poly.one(ctx))}
    return hensel_root(coeffs, LaurentSeries.one(ctx).truncate(-1), n).truncate(-n)


def cmd_christol(args) -> dict:
    ctx = _ctx(args)
    if ctx.s != 1:
        raise UsageError("christol works over prime fields")
    n = args.digits or required_prefix(ctx.p, args.depth, args.skip, args.window)
    if args.input is not None:
        f = read_series(args.input)
        source = "file"
    elif args.source == "rational":
        f = LaurentSeries.from_rational(parse_poly(args.num, ctx), parse_poly(args.den, ctx), -n)
        source = "rational"
    elif args.source == "quadratic":
        f = _quadratic_series(ctx, n)
        source = "quadratic"
    else:
        f, _ = theta_constructors("Theta2", ctx, ctx.p, 1, prec=-n)
        source = "theta2"
    v = christol_digits(f)
    report = kernel_enumerate(v, f.ctx.p, args.depth, args.skip, args.max_classes, args.window)
    out = {"command": "christol", "source": source, "p": f.ctx.p, "digits": len(v)}
    out["kernel"] = _kernel_block(report, v, args)
    out["issues"] = [] if report.closed else ["digit kernel did not close within the bounds"]
    return out


def cmd_quartic(args) -> dict:
    pipe = quartic_expand(args.n)
    cf = pipe.cf
    fr = frequency_check(10)
    v = ln_mn(10)
    out = {"command": "quartic", "n": args.n, "precision": -pipe.precision}
    out["cf"] = cf_report(cf)
    out["certified"] = cf.certified - 1  # quotients after the leading 0
    out["matches_omega"] = pipe.matches_omega
    out["matches_w"] = pipe.matches_w
    out["ratio"] = {
        "n": 10,
        "m_n": v.m,
        "l_n": v.l,
        "fraction": f"{v.m}/{v.l}",
        "value": float(Fraction(v.m, v.l)),
        "dist_to_limit": fr.distance,
        "within_1e-3": fr.within(Fraction(1, 1000)),
    }
    out["estimate"] = _estimate_json(exponent_degrees(cf))
    issues = []
    if not pipe.matches_omega:
        issues.append("quotients differ from the Omega word")
    if not pipe.matches_w:
        issues.append("leading coefficients differ from the W word")
    out["issues"] = issues
    return out


def _depths(text: str) -> list[int]:
    try:
        if "-" in text:
            lo, hi = (int(x) for x in text.split("-", 1))
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--depths must look like 8-10 or 8,9,10, got {text!r}") from None


def cmd_report(args) -> dict:
    if args.kind == "sweep":
        results = oracle_sweep(args.seed, args.count, args.n, workers=args.workers)
        out = {
            "command": "report",
            "kind": "sweep",
            "generator": GENERATOR,
            "seed": args.seed,
            "count": args.count,
            "n": args.n,
            "results": [r.to_json() for r in results],
            "all_agree": all(r.agree for r in results),
            "all_certified": all(r.residual_certified for r in results),
        }
        bad = [r.index for r in results if not (r.agree and r.residual_certified)]
        out["issues"] = [f"instances failing the oracle check: {bad}"] if bad else []
        return out
    depths = _depths(args.depths)
    n_terms = required_prefix(2, max(depths), args.skip)
    evidence = nonautomatic_evidence(w_sequence(n_terms), depths, 2, args.skip, args.max_classes)
    out = {"command": "report", "kind": "counterexample"}
    out.update(counterexample_report(args.n_ratio, evidence, args.n_max))
    m = read_morph(args.morph) if args.morph else quartic_morphism()
    M = incidence_matrix(m)
    pr = perron_eigenvalue(M.entries)
    out["perron"] = {"matrix": M.to_lists(), "value": pr.value, "char_poly": list(pr.char_poly) if pr.char_poly else None,
                     "factored": pr.factored}
    out["verdict"] = evidence.verdict
    out["issues"] = [] if pr.converged else ["power iteration for the dominant eigenvalue did not converge"]
    return out


COMMANDS = {
    "expand": cmd_expand,
    "family": cmd_family,
    "theta": cmd_theta,
    "kernel": cmd_kernel,
    "christol": cmd_christol,
    "quartic": cmd_quartic,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common, field = _common(), _field()
    parser = _Parser(prog="hypercf", description="Hyperquadratic continued fractions over finite fields.")
    parser.add_argument("--version", action="version", version=f"hypercf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("expand", parents=[common], help="expand a spec (bootstrap) or a series file")
    p.add_argument("--spec", help="hyperquadratic spec file (.spec, JSON)")
    p.add_argument("--input", help="Laurent series file (.ser)")
    p.add_argument("--n", type=int, default=20, help="partial quotients to compute (default 20)")
    p.add_argument("--method", choices=("homographic", "series"), default="homographic")
    p.add_argument("--residual-target", type=int, default=400, help="series precision for the residual check")

    p = sub.add_parser("family", parents=[common, field], help="closed-form expansion of an F1/F2/F3 member")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--family", choices=("F1", "F2", "F3"), required=True)
    p.add_argument("--l", type=int, default=None, help="prefix length (checked against --A)")
    p.add_argument("--A", action="append", help="prefix quotient(s); repeat or comma-separate")
    p.add_argument("--eps", default=None)
    p.add_argument("--eps1", default=None)
    p.add_argument("--eps2", default=None)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--relaxed", action="store_true", help="F3 with T dividing only odd-indexed a_i")
    p.add_argument("--no-check", dest="check", action="store_false", help="skip the bootstrap cross-check")

    p = sub.add_parser("theta", parents=[common, field], help="the Theta1 / Theta2 examples")
    p.add_argument("--which", choices=("1", "2", "Theta1", "Theta2"), default="1")
    p.add_argument("--r", type=int, default=None, help="power of p (default p)")
    p.add_argument("--n", type=int, default=12)

    def kernel_opts(p, depth, k=True):
        if k:
            p.add_argument("--k", type=int, default=2)
        p.add_argument("--depth", type=int, default=depth)
        p.add_argument("--skip", type=int, default=64)
        p.add_argument("--max-classes", type=int, default=200)
        p.add_argument("--window", type=int, default=MIN_WINDOW)
        p.add_argument("--dfao", action="store_true", help="attach the automaton when the kernel closes")
        p.add_argument("--msd", action="store_true", help="automaton reads most significant digit first")

    p = sub.add_parser("kernel", parents=[common], help="k-kernel enumeration of a .seq file")
    p.add_argument("--input", required=True)
    p.add_argument("--alphabet", default=None, help="comma-separated allowed symbols")
    kernel_opts(p, 8)

    p = sub.add_parser("christol", parents=[common, field], help="p-kernel of the digits of a series")
    p.add_argument("--source", choices=("rational", "quadratic", "theta2"), default="rational")
    p.add_argument("--input", default=None, help="series file (.ser) instead of a built-in source")
    p.add_argument("--num", default="1")
    p.add_argument("--den", default="T^2+T+2")
    p.add_argument("--digits", type=int, default=None, help="digits to generate (default: enough for the depth)")
    kernel_opts(p, 6, k=False)

    p = sub.add_parser("quartic", parents=[common], help="the quartic over F_3 against the Omega and W words")
    p.add_argument("--n", type=int, default=168)

    p = sub.add_parser("report", parents=[common], help="counterexample report or oracle-equivalence sweep")
    p.add_argument("--kind", choices=("counterexample", "sweep"), default="counterexample")
    p.add_argument("--n-ratio", type=int, default=10)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--depths", default="8-10")
    p.add_argument("--skip", type=int, default=64)
    p.add_argument("--max-classes", type=int, default=400)
    p.add_argument("--morph", default=None, help="morphism file (.morph) for the Perron block")
    p.add_argument("--count", type=int, default=20, help="sweep: samples per family")
    p.add_argument("--n", type=int, default=200, help="sweep: partial quotients per instance")
    p.add_argument("--workers", type=int, default=1, help="sweep: worker processes")
    return parser


def _text(obj, prefix="") -> list[str]:
    lines = []
    for key in sorted(obj):
        val = obj[key]
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            lines.extend(_text(val, name + "."))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            for i, item in enumerate(val):
                lines.extend(_text(item, f"{name}[{i}]."))
        elif isinstance(val, list):
            lines.append(f"{name}: [{', '.join(str(x) for x in val)}]")
        else:
            lines.append(f"{name}: {val}")
    return lines


def render(report: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    return "\n".join(_text(report)) + "\n"


def _check_counts(args):
    for name in ("n", "depth", "skip", "max_classes", "k", "count", "workers", "digits", "window"):
        val = getattr(args, name, None)
        if val is None:
            continue
        low = {"k": 2, "skip": 0, "depth": 0}.get(name, 1)
        if val < low:
            raise UsageError(f"--{name.replace('_', '-')} must be >= {low}, got {val}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _check_counts(args)
        report = COMMANDS[args.command](args)
    except (UsageError, FormatError, PolyParseError, ValueError, TypeError, OSError,
            InexactDivisionError, PrecisionError) as exc:
        print(f"hypercf {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(render(report, args.json))
    sys.stdout.flush()
    if args.strict and report.get("issues"):
        return EXIT_STRICT
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
