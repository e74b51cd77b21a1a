"""Command-line front end.

Exit codes are 0 when everything checked passes, 1 when a check fails and 2
for usage or parse errors.  ``SPTCRANK_ORDER`` sets the default truncation
order of ``eval`` (20 when unset).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import combinatorics, identities, spt
from .qseries import QMonomial, QSeries, eta, jacprod, lambert_sum, poch_finite, poch_infinite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_EVAL_ORDER = 20
ORDER_ENV = "SPTCRANK_ORDER"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Expression language


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class ExprEvalError(ValueError):
    pass


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class QPow:
    exponent: int


@dataclass(frozen=True)
class Poch:
    """(sign q^a; q^m)_n, with n None for the infinite product."""

    sign: int
    a: int
    m: int
    n: int | None


@dataclass(frozen=True)
class Jac:
    a: int
    m: int


@dataclass(frozen=True)
class Eta:
    m: int


@dataclass(frozen=True)
class Lambert:
    """sum over n of (-1)^n q^(a2 n^2 + a1 n + a0) / (1 - q^(b1 n + b0))."""

    a2: int
    a1: int
    a0: int
    b1: int
    b0: int


@dataclass(frozen=True)
class Neg:
    operand: "ExprAst"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Power:
    base: "ExprAst"
    exponent: int


@dataclass(frozen=True)
class Paren:
    inner: "ExprAst"


ExprAst = Int | QPow | Poch | Jac | Eta | Lambert | Neg | BinOp | Power | Paren


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j]), i))
            i = j
        elif ch.isalpha():
            j = i
            while j < len(text) and text[j].isalpha():
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
        elif ch in "+-*/^(),;":
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str | None = None, what: str = ""):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ExprSyntaxError(f"expected {what or kind}, found {found}", tok[2])
        self.i += 1
        return tok

    def signed_int(self) -> int:
        sign = 1
        if self.peek()[0] == "-":
            self.take()
            sign = -1
        return sign * self.take("int", "an integer")[1]

    def parse(self) -> ExprAst:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self) -> ExprAst:
        if self.peek()[0] == "-":
            self.take()
            node: ExprAst = Neg(self.term())
        else:
            node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> ExprAst:
        node = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> ExprAst:
        node = self.atom()
        if self.peek()[0] == "^":
            self.take()
            node = Power(node, self.signed_int())
        return node

    def q_power(self) -> int:
        name = self.take("name", "'q'")
        if name[1] != "q":
            raise ExprSyntaxError(f"expected 'q', found {name[1]!r}", name[2])
        self.take("^", "'^'")
        return self.take("int", "a nonnegative exponent")[1]

    def args(self, count: int) -> list[int]:
        self.take("(", "'('")
        out = []
        for k in range(count):
            if k:
                self.take(",", "','")
            out.append(self.signed_int())
        self.take(")", "')'")
        return out

    def atom(self) -> ExprAst:
        tok = self.peek()
        kind, value, pos = tok
        if kind == "int":
            self.take()
            return Int(value)
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")", "')'")
            return Paren(inner)
        if kind != "name":
            found = "end of input" if kind == "end" else repr(value)
            raise ExprSyntaxError(f"expected an operand, found {found}", pos)
        if value == "q":
            return QPow(self.q_power())
        self.take()
        if value == "poch":
            self.take("(", "'('")
            sign = 1
            if self.peek()[0] in ("+", "-"):
                sign = -1 if self.take()[0] == "-" else 1
            a = self.q_power()
            self.take(",", "','")
            m = self.take("int", "a step")[1]
            self.take(",", "','")
            if self.peek()[0] == "name":
                word = self.take()
                if word[1] != "inf":
                    raise ExprSyntaxError(f"expected a length or 'inf', found {word[1]!r}", word[2])
                n = None
            else:
                n = self.take("int", "a length or 'inf'")[1]
            self.take(")", "')'")
            return Poch(sign, a, m, n)
        if value == "jac":
            return Jac(*self.args(2))
        if value == "eta":
            return Eta(*self.args(1))
        if value == "lambert":
            return Lambert(*self.args(5))
        raise ExprSyntaxError(f"unknown name {value!r}", pos)


def parse_expr(text: str) -> ExprAst:
    return _Parser(text).parse()


def format_expr(node: ExprAst) -> str:
    """Print an AST in the input syntax; parsing the result gives an equal AST."""
    if isinstance(node, Int):
        return str(node.value)
    if isinstance(node, QPow):
        return f"q^{node.exponent}"
    if isinstance(node, Poch):
        sign = "-" if node.sign < 0 else ""
        n = "inf" if node.n is None else str(node.n)
        return f"poch({sign}q^{node.a},{node.m},{n})"
    if isinstance(node, Jac):
        return f"jac({node.a},{node.m})"
    if isinstance(node, Eta):
        return f"eta({node.m})"
    if isinstance(node, Lambert):
        return "lambert({},{},{},{},{})".format(node.a2, node.a1, node.a0, node.b1, node.b0)
    if isinstance(node, Neg):
        return "-" + format_expr(node.operand)
    if isinstance(node, BinOp):
        return f"{format_expr(node.left)}{node.op}{format_expr(node.right)}"
    if isinstance(node, Power):
        return f"{format_expr(node.base)}^{node.exponent}"
    if isinstance(node, Paren):
        return f"({format_expr(node.inner)})"
    raise TypeError(f"not an expression node: {node!r}")


def eval_expr(node: ExprAst, order: int) -> QSeries:
    if isinstance(node, Int):
        return QSeries.monomial(0, order, node.value)
    if isinstance(node, QPow):
        return QSeries.monomial(node.exponent, order)
    try:
        if isinstance(node, Poch):
            base = QMonomial(node.sign, node.a)
            if node.m < 1:
                raise ExprEvalError("Pochhammer step must be positive")
            if node.n is None:
                return poch_infinite(base, node.m, order)
            return poch_finite(base, node.m, node.n, order)
        if isinstance(node, Jac):
            return jacprod(node.a, node.m, order)
        if isinstance(node, Eta):
            if node.m < 1:
                raise ExprEvalError("eta needs a positive argument")
            return eta(node.m, order)
        if isinstance(node, Lambert):
            if node.a2 <= 0 or node.b1 == 0:
                raise ExprEvalError("lambert needs a2 > 0 and b1 != 0")
            return lambert_sum(
                lambda n: node.a2 * n * n + node.a1 * n + node.a0,
                lambda n: node.b1 * n + node.b0,
                order,
            )
    except ValueError as exc:
        if isinstance(exc, ExprEvalError):
            raise
        raise ExprEvalError(str(exc)) from None
    if isinstance(node, Neg):
        return -eval_expr(node.operand, order)
    if isinstance(node, Paren):
        return eval_expr(node.inner, order)
    if isinstance(node, Power):
        base = eval_expr(node.base, order)
        try:
            return base**node.exponent
        except ZeroDivisionError as exc:
            raise ExprEvalError(f"negative power of a series whose {exc}") from None
    if isinstance(node, BinOp):
        left, right = eval_expr(node.left, order), eval_expr(node.right, order)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        try:
            return left * right.invert()
        except ZeroDivisionError as exc:
            raise ExprEvalError(f"division by a series whose {exc}") from None
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# Commands


def _env_order() -> int:
    raw = os.environ.get(ORDER_ENV)
    if raw is None:
        return DEFAULT_EVAL_ORDER
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{ORDER_ENV} must be an integer, got {raw!r}") from None
    if value < 0:
        raise UsageError(f"{ORDER_ENV} must be nonnegative")
    return value


def _emit_json(obj, out) -> None:
    json.dump(obj, out, indent=2)
    out.write("\n")


def cmd_verify(args, out) -> int:
    if args.id:
        try:
            cases = [identities.get_case(args.id)]
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        suite = args.id
    else:
        cases = identities.select(None if args.all else args.filter)
        suite = "all" if args.all else args.filter
        if not cases:
            raise UsageError(f"no identity matches {args.filter!r}")
    report = identities.SuiteReport()
    for case in cases:
        r = identities.verify(case, args.order)
        report.cases.append(r)
        if args.format == "text":
            status = "PASS" if r.passed else "FAIL"
            extra = ""
            if r.first_mismatch is not None:
                extra += f" first mismatch at q^{r.first_mismatch}"
            if r.vanishing_failures:
                extra += f" progression terms at {r.vanishing_failures[:5]}"
            out.write(f"{status} {r.id} order={r.order} {int(r.elapsed * 1000)}ms{extra}\n")
            out.flush()
    if args.format == "json":
        _emit_json(report.as_dict(suite), out)
    else:
        out.write(f"{report.total - report.failed}/{report.total} passed\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def _check_family(name: str, allowed: Sequence[str]) -> None:
    if name not in allowed:
        raise UsageError(f"unknown family {name!r}; choose from {', '.join(allowed)}")


def cmd_congruence(args, out) -> int:
    _check_family(args.family, spt.FAMILIES)
    if args.mod < 2:
        raise UsageError("--mod must be at least 2")
    if args.max < 0:
        raise UsageError("--max must be nonnegative")
    rep = spt.congruence_check(args.family, args.mod, args.residue, args.max)
    root = rep.root_passed
    data = {
        "family": rep.family,
        "modulus": rep.modulus,
        "residue": rep.residue,
        "max": rep.n_max,
        "checked": len(rep.checked),
        "mod_pass": rep.mod_passed,
        "root_pass": root,
        "equal_residue_classes": rep.equal_residue_classes,
        "pass": rep.passed,
        "witness": rep.witness,
    }
    if args.format == "json":
        _emit_json(data, out)
    else:
        label = f"spt_{rep.family}({rep.modulus}n+{rep.residue}) == 0 (mod {rep.modulus})"
        out.write(f"{label}, {len(rep.checked)} values up to {rep.n_max}\n")
        out.write(f"  modular check: {'pass' if rep.mod_passed else 'FAIL'}\n")
        if root is None:
            out.write(f"  root-of-unity check: skipped ({rep.root_note})\n")
        else:
            out.write(f"  root-of-unity check: {'pass' if root else 'FAIL'}\n")
            verdict = "yes" if rep.equal_residue_classes else "no"
            out.write(f"  M(k,{rep.modulus},n) equal for all k on the progression: {verdict}\n")
        if rep.witness is not None:
            out.write(f"  witness: n = {rep.witness}, spt = {spt.spt_series(rep.family, rep.witness)[rep.witness]}\n")
        out.write("PASS\n" if rep.passed else "FAIL\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_table(args, out) -> int:
    _check_family(args.family, spt.FAMILIES)
    if args.max < 1:
        raise UsageError("--max must be at least 1")
    if args.what == "mresidue" and (args.mod is None or args.mod < 1):
        raise UsageError("--what mresidue needs --mod t with t >= 1")
    values = spt.spt_series(args.family, args.max)
    rows = []
    for n in range(1, args.max + 1):
        row = {"n": n, "value": int(values[n])}
        if args.what == "mresidue":
            for k, v in enumerate(spt.m_residues(args.family, args.mod, n, args.max)):
                row[f"m{k}"] = int(v)
        rows.append(row)
    if args.format == "json":
        _emit_json({"family": args.family, "what": args.what, "rows": rows}, out)
    else:
        writer = csv.writer(out, lineterminator="\n")
        header = list(rows[0])
        writer.writerow(header)
        for row in rows:
            writer.writerow([row[h] for h in header])
    return EXIT_OK


def cmd_oracle_check(args, out) -> int:
    _check_family(args.kind, combinatorics.KINDS)
    if args.max < 1:
        raise UsageError("--max must be at least 1")
    series = spt.spt_series(args.kind, args.max)
    bad = []
    for n in range(1, args.max + 1):
        try:
            expected = combinatorics.oracle_spt(args.kind, n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if series[n] != expected:
            bad.append((n, int(series[n]), expected))
    for n, got, want in bad:
        out.write(f"  n={n}: series {got}, enumeration {want}\n")
    out.write(f"{args.kind}: n = 1..{args.max} {'PASS' if not bad else 'FAIL'}\n")
    return EXIT_OK if not bad else EXIT_FAIL


NONNEG_FAMILIES = ("C1", "C5", "E4")
PROVEN_NONNEG = ("E4",)


def negative_entries(family: str, n_max: int) -> list[tuple[int, int, int]]:
    """(m, n, M(m, n)) for every negative coefficient with n <= n_max."""
    s = spt.spt_crank_series(family, n_max).truncate(n_max)
    arr = s.array
    hits = np.argwhere((arr < 0).astype(bool))
    return [(int(col) + s.zmin, int(row), int(arr[row, col])) for row, col in hits]


def cmd_scan_nonneg(args, out) -> int:
    _check_family(args.family, NONNEG_FAMILIES)
    if args.max < 1:
        raise UsageError("--max must be at least 1")
    neg = negative_entries(args.family, args.max)
    proven = args.family in PROVEN_NONNEG
    for m, n, v in neg[:20]:
        out.write(f"  M_{args.family}({m},{n}) = {v}\n")
    if not neg:
        out.write(f"{args.family}: no negative M(m,n) for n <= {args.max}\n")
        return EXIT_OK
    if proven:
        out.write(f"{args.family}: FAIL, {len(neg)} negative entries\n")
        return EXIT_FAIL
    out.write(f"{args.family}: finding, {len(neg)} negative entries (reported, not a failure)\n")
    return EXIT_OK


def cmd_eval(args, out) -> int:
    order = args.order if args.order is not None else _env_order()
    if order < 0:
        raise UsageError("--order must be nonnegative")
    try:
        node = parse_expr(args.expr)
        series = eval_expr(node, order)
    except (ExprSyntaxError, ExprEvalError) as exc:
        raise UsageError(str(exc)) from None
    out.write(",".join(str(c) for c in series.coeffs()) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgParser(prog="sptcrank", description="Verify spt-crank identities and congruences.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    p = sub.add_parser("verify", help="check registered identities")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--id")
    group.add_argument("--filter")
    group.add_argument("--all", action="store_true")
    p.add_argument("--order", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("congruence", help="check spt_X(t n + r) == 0 (mod t)")
    p.add_argument("--family", required=True)
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--residue", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_congruence)

    p = sub.add_parser("table", help="print spt_X(n) and residue-class counts")
    p.add_argument("--family", required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--what", choices=("spt", "mresidue"), default="spt")
    p.add_argument("--mod", type=int)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("oracle-check", help="compare series against partition enumeration")
    p.add_argument("--kind", required=True)
    p.add_argument("--max", type=int, required=True)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("scan-nonneg", help="look for negative M_X(m, n)")
    p.add_argument("--family", required=True)
    p.add_argument("--max", type=int, required=True)
    p.set_defaults(func=cmd_scan_nonneg)

    p = sub.add_parser("eval", help="expand a q-series expression")
    p.add_argument("--expr", required=True)
    p.add_argument("--order", type=int)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        print(f"sptcrank: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
