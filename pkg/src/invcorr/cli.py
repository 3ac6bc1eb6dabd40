"""Command-line front end.

Exit codes: 0 success, 1 certificate failure, 2 budget exceeded,
3 parse or usage error.
"""

from __future__ import annotations

import argparse
import shlex
import sys
from fractions import Fraction

from . import amenable, correspond, generic, inverse
from .errors import (AuditFailure, BudgetExceeded, DomainError, InvCorrError, SpecParseError,
                     VerifyFailure)
from .measure import MeasureOracle, invariance_audit
from .report import RunReport
from .specfile import load_spec
from .words import patterns_upto, write_word

EXIT_OK, EXIT_CERT, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def rat(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _lattice_code(sigma) -> str:
    return "".join(str(b) for _, b in sigma.cells) or "-"


def _emit(rep: RunReport, args) -> None:
    sys.stdout.write(rep.render_csv() if getattr(args, "csv", False) else rep.render())


def cmd_measure_check(args, rep: RunReport) -> int:
    m = load_spec(args.measure)
    rep.add("measure", m.describe()).add("depth", args.depth).add("delta", args.delta)
    if isinstance(m, MeasureOracle):
        audit = invariance_audit(m, args.depth, args.delta, raise_on_fail=False)
    else:
        audit = amenable.lattice_invariance_audit(m, m.d, args.depth, args.delta, raise_on_fail=False)
    rep.add("tolerance", audit.tolerance).add("max_residual", audit.max_residual)
    rep.add("passed", audit.passed)
    rep.residuals(audit.residuals.items())
    if not audit.passed:
        rep.add("violations", " ".join(v or "-" for v in audit.violations))
        rep.status = "audit-failed"
        return EXIT_CERT
    return EXIT_OK


def _require_1d(m) -> MeasureOracle:
    if not isinstance(m, MeasureOracle):
        raise DomainError("this command needs a one-dimensional measure spec")
    return m


def cmd_approx(args, rep: RunReport) -> int:
    m = _require_1d(load_spec(args.measure))
    rep.add("measure", m.describe()).add("j", args.j).add("eps", args.eps).add("budget", args.budget)
    build_eps = args.eps / 2 if args.pad is not None else args.eps
    r = inverse.build(m, args.j, build_eps, args.budget, args.workers)
    p = r.params
    rep.add("k", p.k).add("l", p.l).add("delta", p.delta)
    if args.pad is not None:
        rep.add("built_eps", build_eps).add("built_length", len(r.word))
        r = inverse.pad_to(r, args.pad, m, args.eps, args.workers)
        rep.add("pad", args.pad)
    fb = inverse.fallback_params(args.j, args.eps)
    rep.add("length", len(r.word)).add("fallback_length", fb.length)
    rep.add("certified_error", r.certified_error).add("theoretical_bound", r.theoretical_bound)
    rep.residuals((s, r.residuals[s]) for s in patterns_upto(args.j))
    write_word(args.out, r.word)
    rep.add("out", args.out)
    return EXIT_OK


def cmd_generic(args, rep: RunReport) -> int:
    m = _require_1d(load_spec(args.measure))
    rep.add("measure", m.describe()).add("budget", args.budget)
    if args.bits is not None:
        w = generic.bits(m, args.bits, args.budget)
        rep.add("n", args.bits)
        if args.out:
            write_word(args.out, w)
            rep.add("out", args.out)
        else:
            rep.add("bits", str(w))
        return EXIT_OK
    j, eps = int(args.certify[0]), rat(args.certify[1])
    g = generic.check_generic(m, j, eps, args.budget, raise_on_fail=False)
    rep.add("j", j).add("eps", eps).add("n", g.n).add("m_actual", g.m_actual)
    rep.add("m_universal", g.m_universal).add("checked", " ".join(map(str, g.checked)))
    rep.add("max_residual", g.max_residual).add("passed", g.passed)
    rep.residuals(g.residuals.items())
    if not g.passed:
        rep.status = "genericity-failed"
        return EXIT_CERT
    return EXIT_OK


def cmd_roundtrip(args, rep: RunReport) -> int:
    m = _require_1d(load_spec(args.measure))
    rep.add("measure", m.describe()).add("j", args.j).add("eps", args.eps)
    provider = inverse.approx_provider(m, args.budget)
    slack = Fraction(0) if m.exact else args.eps / 4
    res = {}
    for s in patterns_upto(args.j):
        res[s] = abs(inverse.measure_from_approx(provider, s, args.eps) - m.query(s, args.eps / 4))
    worst = max(res.values())
    ok = worst + slack < args.eps
    rep.add("max_residual", worst).add("passed", ok)
    rep.residuals(res.items())
    if not ok:
        rep.status = "roundtrip-failed"
        return EXIT_CERT
    return EXIT_OK


def cmd_amenable_approx(args, rep: RunReport) -> int:
    m = load_spec(args.measure)
    if isinstance(m, MeasureOracle):
        m = amenable.ShiftOracleZ1(m)
    rep.add("measure", m.describe()).add("d", m.d).add("j", args.j).add("eps", args.eps)
    M, z = amenable.build_zd(m, m.d, args.j, args.eps, args.budget, args.workers)
    rep.add("k", z.k).add("copies", z.copies).add("delta", z.delta)
    rep.add("size", M.size).add("k_required", z.k_required).add("domain_ratio", z.domain_ratio)
    rep.add("measured_error", z.measured_error).add("ledger_bound", z.ledger_bound)
    rep.add("within_ledger", z.within_ledger).add("met_eps", z.met_eps)
    rep.add("bound_meets_eps", z.bound_meets_eps)
    rep.residuals((_lattice_code(s), v) for s, v in z.residuals.items())
    if args.out:
        amenable.write_model(args.out, M)
        rep.add("out", args.out)
    return EXIT_OK


def cmd_extract(args, rep: RunReport) -> int:
    words = correspond.read_words(args.words)
    if not words:
        raise DomainError("word file is empty")
    table = correspond.density_table(words, args.max_j)
    keep = correspond.extract_subsequence(table, args.tol)
    rep.add("words", len(words)).add("max_j", args.max_j).add("tol", args.tol)
    rep.add("survivors", " ".join(map(str, keep)))
    rep.residuals(zip(table.patterns, table.cells[keep[0]]))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="invcorr", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def common(sp, budget_default):
        sp.add_argument("--measure", required=True, metavar="FILE")
        sp.add_argument("--budget", type=int, default=budget_default)
        sp.add_argument("--csv", action="store_true", help="emit only the residual table as CSV")

    sp = sub.add_parser("measure-check", help="invariance audit of a measure spec")
    sp.add_argument("--measure", required=True, metavar="FILE")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--delta", type=rat, required=True)
    sp.add_argument("--csv", action="store_true")
    sp.set_defaults(func=cmd_measure_check)

    sp = sub.add_parser("approx", help="build a certified (j, eps)-good word")
    common(sp, inverse.DEFAULT_BUDGET)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--eps", type=rat, required=True)
    sp.add_argument("--pad", type=int)
    sp.add_argument("--out", required=True, metavar="FILE")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_approx)

    sp = sub.add_parser("generic", help="emit or certify a generic point")
    common(sp, inverse.DEFAULT_BUDGET)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--bits", type=int, metavar="N")
    g.add_argument("--certify", nargs=2, metavar=("J", "EPS"))
    sp.add_argument("--out", metavar="FILE")
    sp.set_defaults(func=cmd_generic)

    sp = sub.add_parser("roundtrip", help="recover the measure from its approximations")
    common(sp, inverse.DEFAULT_BUDGET)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--eps", type=rat, required=True)
    sp.set_defaults(func=cmd_roundtrip)

    sp = sub.add_parser("amenable-approx", help="build a Z^d box model")
    common(sp, amenable.DEFAULT_ZD_BUDGET)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--eps", type=rat, required=True)
    sp.add_argument("--out", metavar="FILE")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_amenable_approx)

    sp = sub.add_parser("extract", help="thin a word family until densities agree")
    sp.add_argument("--words", required=True, metavar="FILE")
    sp.add_argument("--tol", type=rat, required=True)
    sp.add_argument("--max-j", type=int, default=2)
    sp.add_argument("--csv", action="store_true")
    sp.set_defaults(func=cmd_extract)
    return p


def main(argv=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        # m_universal and fallback sizes are printed as exact decimals
        sys.set_int_max_str_digits(0)
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = make_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    if args.cmd == "generic" and args.certify is not None:
        try:
            int(args.certify[0])
            rat(args.certify[1])
        except (ValueError, argparse.ArgumentTypeError) as exc:
            print(f"invcorr generic: bad --certify value: {exc}", file=sys.stderr)
            return EXIT_USAGE
    rep = RunReport(shlex.join(["invcorr", *argv]))
    try:
        code = args.func(args, rep)
    except SpecParseError as exc:
        print(f"{args.measure}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        rep.add("best_error", exc.best_error if exc.best_error is not None else "none")
        for k, v in exc.details.items():
            rep.add(k, v)
        rep.status = "budget-exceeded"
        _emit(rep, args)
        print(exc, file=sys.stderr)
        return EXIT_BUDGET
    except (VerifyFailure, AuditFailure) as exc:
        rep.status = "certificate-failed"
        _emit(rep, args)
        print(exc, file=sys.stderr)
        return EXIT_CERT
    except (InvCorrError, OSError) as exc:
        print(f"invcorr: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(rep, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
