"""Bundled reference factorizations and their verification."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from .arith import make_order
from .closed_formula import NotApplicableEvenD, evaluate_closed_formula
from .endo import HermitianForm
from .intersection import pdr_report


@dataclass(frozen=True)
class TableRow:
    d: int
    pol: tuple[int, int, int, int]
    explicit: dict[int, int]
    formula: dict[int, int] | None
    flags: tuple[str, ...] = ()
    note: str = ""
    errata: dict = field(default_factory=dict, compare=False, hash=False)

    def form(self) -> HermitianForm:
        return HermitianForm(make_order(self.d), *self.pol)

    def expected(self, errata: bool = False) -> tuple[dict[int, int], dict[int, int] | None]:
        explicit, formula = self.explicit, self.formula
        if errata:
            explicit = self.errata.get("explicit", explicit)
            formula = self.errata.get("formula", formula)
        return explicit, formula


def _ints(m):
    return None if m is None else {int(p): e for p, e in m.items()}


def load_tables(path: str | None = None) -> list[TableRow]:
    if path is None:
        text = resources.files("cm2").joinpath("data/tables.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    rows = []
    for r in json.loads(text)["rows"]:
        errata = {k: _ints(v) for k, v in r.get("errata", {}).items()}
        rows.append(
            TableRow(
                r["d"], tuple(r["pol"]), _ints(r["explicit"]), _ints(r["formula"]),
                tuple(r.get("flags", ())), r.get("note", ""), errata,
            )
        )
    return rows


@dataclass
class RowResult:
    row: TableRow
    exponents: dict[int, int] | None
    formula: dict[int, int] | None
    formula_applicable: bool
    errors: list[str]
    explicit_ok: bool = False
    formula_ok: bool = False

    @property
    def ok(self) -> bool:
        return self.explicit_ok and self.formula_ok


def check_row(row: TableRow, errata: bool = False) -> RowResult:
    errors = []
    O = make_order(row.d)
    P = row.form()
    try:
        exps = pdr_report(O, P).exponents
    except ArithmeticError as err:
        exps = None
        errors.append(f"{type(err).__name__}: {err}")
    formula = None
    applicable = True
    try:
        formula = evaluate_closed_formula(O, P).exponents
    except NotApplicableEvenD:
        applicable = False
    except ArithmeticError as err:
        errors.append(f"{type(err).__name__}: {err}")
    want_explicit, want_formula = row.expected(errata)
    res = RowResult(row, exps, formula, applicable, errors)
    res.explicit_ok = exps is not None and exps == want_explicit
    if row.d % 2 == 0:
        # even d: the formula is not stated, whatever the cell holds
        res.formula_ok = not applicable
    else:
        res.formula_ok = applicable and formula == want_formula
    return res


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("CM2_THREADS", "1")))
    except ValueError:
        return 1


def verify_tables(rows: list[TableRow], disc_max: int | None = None, errata: bool = False) -> list[RowResult]:
    todo = [r for r in rows if disc_max is None or r.d <= disc_max]
    n = _workers()
    if n > 1 and len(todo) > 1:
        with ProcessPoolExecutor(n) as pool:
            results = list(pool.map(check_row, todo, [errata] * len(todo)))
    else:
        results = [check_row(r, errata) for r in todo]
    results.sort(key=lambda res: (res.row.d, res.row.pol))
    return results
