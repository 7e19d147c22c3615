"""Command line interface: ``cm2 <command> [options]``.

Exit codes: 0 success, 1 usage or input error, 2 verification mismatch,
3 a dyadic Gross-Keating case outside the implemented search.
"""

from __future__ import annotations

import argparse
import json
import sys

from .arith import NonFundamentalDiscriminant, make_order
from .closed_formula import CharConvention, NotApplicableEvenD, closed_q, evaluate_closed_formula
from .endo import HermitianForm, gross_lattice, trace_zero_lattice
from .gk import GK2Unhandled
from .intersection import conjecture_scan, pdr_report
from .lattice import det
from .polarizations import enumerate_polarizations
from .sieve import candidate_primes, enumerate_T
from .tables import load_tables, verify_tables

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_GK2 = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _factored(exps: dict | None) -> str:
    if exps is None:
        return "-"
    if not exps:
        return "1"
    return " ".join(f"{p}^{e}" for p, e in sorted(exps.items()))


def _jsonable_exps(exps: dict | None):
    return None if exps is None else {str(p): e for p, e in sorted(exps.items())}


def _record(d: int, P: HermitianForm | None) -> dict:
    return {
        "disc": d,
        "pol": list(P.as_tuple()) if P is not None else None,
        "entries": [],
        "exponents": {},
        "formula": None,
        "errors": [],
    }


def _parse_pol(s: str) -> tuple[int, int, int, int]:
    try:
        parts = tuple(int(x) for x in s.split(","))
    except ValueError:
        raise UsageError(f"--pol expects a,c,b1,b2 (integers), got {s!r}")
    if len(parts) != 4:
        raise UsageError(f"--pol expects four integers a,c,b1,b2, got {s!r}")
    return parts


def _forms(args) -> tuple[int, list[HermitianForm]]:
    try:
        O = make_order(args.disc)
    except NonFundamentalDiscriminant as err:
        raise UsageError(str(err))
    if getattr(args, "pol", None):
        try:
            return O.d, [HermitianForm(O, *_parse_pol(args.pol))]
        except ValueError as err:
            raise UsageError(str(err))
    return O.d, enumerate_polarizations(O)


def _ordered(obj):
    # sorted keys everywhere; prime keys in numeric order
    if isinstance(obj, dict):
        if obj and all(isinstance(k, str) and k.isdigit() for k in obj):
            keys = sorted(obj, key=int)
        else:
            keys = sorted(obj)
        return {k: _ordered(obj[k]) for k in keys}
    if isinstance(obj, (list, tuple)):
        return [_ordered(x) for x in obj]
    return obj


def _emit(args, payload, text_lines):
    if args.json:
        print(json.dumps(_ordered(payload)))
    else:
        for line in text_lines:
            print(line)


# --- commands -------------------------------------------------------------------


def cmd_polarizations(args) -> int:
    d, forms = _forms(args)
    payload = [_record(d, P) for P in forms]
    _emit(args, payload, [str(P) for P in forms])
    return EXIT_OK


def cmd_gram(args) -> int:
    d, forms = _forms(args)
    payload, lines = [], []
    for P in forms:
        L = gross_lattice(P)
        L0 = trace_zero_lattice(P)
        rec = _record(d, P)
        rec["gram"] = L.gram
        rec["det"] = int(L.det)
        rec["q1"] = [[str(x) for x in row] for row in L0.gram]
        lines += [f"{P}  Gram(L, q/4) = {L.gram}  det = {L.det}", f"    Gram(L0, q/4) = {rec['q1']}"]
        if d % 2:
            rec["closed_q"] = closed_q(P)
            lines.append(f"    d * Q1^-1 = {rec['closed_q']}")
        payload.append(rec)
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_sieve(args) -> int:
    d, forms = _forms(args)
    O = make_order(d)
    payload, lines = [], []
    for P in forms:
        L = gross_lattice(P)
        raw = enumerate_T(L, congruences=False)
        kept = enumerate_T(L)
        cands = candidate_primes(O, L)
        rec = _record(d, P)
        rec["t_matrices"] = len(raw)
        rec["t_matrices_congruent"] = len(kept)
        rec["det_over_16"] = [t.det // 16 for t in kept]
        rec["candidates"] = cands
        payload.append(rec)
        lines.append(
            f"{P}  T: {len(raw)} -> {len(kept)} after congruences; det/16 = {rec['det_over_16']}; candidates {cands}"
        )
    _emit(args, payload, lines)
    return EXIT_OK


def _pdr_records(args):
    d, forms = _forms(args)
    O = make_order(d)
    out = []
    for P in forms:
        rec = _record(d, P)
        rep = pdr_report(O, P, exhaustive=getattr(args, "exhaustive", False))
        rec["entries"] = [{"p": e.p, "e": e.e} for e in rep.entries]
        rec["exponents"] = _jsonable_exps(rep.exponents)
        rec["_report"] = rep
        out.append(rec)
    return out


def cmd_pdr(args) -> int:
    recs = _pdr_records(args)
    lines = []
    for rec in recs:
        rep = rec.pop("_report")
        lines.append(f"{rep.P}")
        for e in rep.entries:
            parts = ", ".join(
                f"#{c.embedding} GK{c.gk.as_tuple()} e={c.e_l0} eps={c.eps}" for c in e.contributions
            )
            lines.append(f"    p={e.p} e={e.e}   [{parts}]")
    _emit(args, recs, lines)
    return EXIT_OK


def cmd_discriminant(args) -> int:
    recs = _pdr_records(args)
    lines = []
    for rec in recs:
        rep = rec.pop("_report")
        lines.append(f"{rep.P}  {_factored(rep.exponents)}")
    _emit(args, recs, lines)
    return EXIT_OK


def cmd_closed_formula(args) -> int:
    d, forms = _forms(args)
    O = make_order(d)
    payload, lines = [], []
    for P in forms:
        rec = _record(d, P)
        try:
            fp = evaluate_closed_formula(O, P, args.char_convention)
            rec["formula"] = fp.as_json()
            lines.append(f"{P}  {fp}")
        except NotApplicableEvenD as err:
            rec["errors"].append(f"NotApplicableEvenD: {err}")
            lines.append(f"{P}  -")
        payload.append(rec)
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_verify_tables(args) -> int:
    rows = load_tables(args.data)
    results = verify_tables(rows, args.disc_max, errata=args.errata)
    payload, lines = [], []
    for res in results:
        row = res.row
        rec = {
            "disc": row.d,
            "pol": list(row.pol),
            "entries": [],
            "exponents": _jsonable_exps(res.exponents),
            "formula": _jsonable_exps(res.formula) if res.formula_applicable else None,
            "errors": list(res.errors),
            "explicit_ok": res.explicit_ok,
            "formula_ok": res.formula_ok,
        }
        payload.append(rec)
        status = "ok" if res.ok else "MISMATCH"
        want_e, want_f = row.expected(args.errata)
        msg = f"{status:8} d={row.d:<4} {row.form()}  explicit {_factored(res.exponents)}"
        if not res.explicit_ok:
            msg += f" (table {_factored(want_e)})"
        msg += f"  formula {_factored(res.formula) if res.formula_applicable else '-'}"
        if not res.formula_ok:
            msg += f" (table {_factored(want_f)})"
        if not res.ok and row.note:
            msg += f"  [{row.note}]"
        lines.append(msg)
    bad = sum(not r.ok for r in results)
    lines.append(f"{len(results) - bad}/{len(results)} rows match")
    _emit(args, payload, lines)
    return EXIT_OK if bad == 0 else EXIT_MISMATCH


def cmd_conjecture_scan(args) -> int:
    res = conjecture_scan(args.disc_max)
    payload = {
        "disc_max": args.disc_max,
        "checked": res.checked,
        "exceptions": [{"disc": d, "pol": list(P.as_tuple()), "p": p} for d, P, p in res.exceptions],
        "errors": res.errors,
    }
    lines = [f"d={d} {P} p={p}" for d, P, p in res.exceptions]
    lines.append(f"{res.checked} polarizations checked, {len(res.exceptions)} exceptions, {len(res.errors)} errors")
    _emit(args, payload, lines)
    return EXIT_GK2 if res.errors else EXIT_OK


# --- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cm2", description="Arithmetic of principal polarizations on E^2 for CM curves E.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, helptext, pol=True, disc=True):
        p = sub.add_parser(name, help=helptext)
        if disc:
            p.add_argument("--disc", type=int, required=True, help="d, with -d a fundamental discriminant")
        if pol:
            p.add_argument("--pol", help="a,c,b1,b2 for [a, c, b1 + b2 w]; default: all classes")
        p.add_argument("--json", action="store_true", help="machine readable output")
        p.set_defaults(func=func)
        return p

    add("polarizations", cmd_polarizations, "indecomposable principal polarizations", pol=False)
    add("gram", cmd_gram, "Gram matrices of L, L0 and d*Q1^-1")
    add("sieve", cmd_sieve, "extension matrices T and candidate primes")
    p = add("pdr", cmd_pdr, "primes of potentially decomposable reduction with multiplicities")
    p.add_argument("--exhaustive", action="store_true", help="also test every non-split p <= d/4")
    p = add("discriminant", cmd_discriminant, "factorization of the discriminant")
    p.add_argument("--exhaustive", action="store_true", help="also test every non-split p <= d/4")
    p = add("closed-formula", cmd_closed_formula, "evaluate the closed formula")
    p.add_argument(
        "--char-convention",
        choices=[c.value for c in CharConvention],
        default=CharConvention.MINUS_D_OVER_N.value,
    )
    p = add("verify-tables", cmd_verify_tables, "compare with the bundled reference data", pol=False, disc=False)
    p.add_argument("--disc-max", type=int, default=None)
    p.add_argument("--data", default=None, help="alternative data file")
    p.add_argument("--errata", action="store_true", help="apply the corrections recorded in the data file")
    p = add("conjecture-scan", cmd_conjecture_scan, "sieve primes that are not PDR", pol=False, disc=False)
    p.add_argument("--disc-max", type=int, default=200)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"cm2: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except GK2Unhandled as err:
        print(f"cm2: unhandled dyadic case: {err}", file=sys.stderr)
        return EXIT_GK2


if __name__ == "__main__":
    sys.exit(main())
