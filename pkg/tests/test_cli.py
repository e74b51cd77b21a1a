from __future__ import annotations

import csv
import io
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sptcrank import cli
from sptcrank.cli import ExprEvalError, ExprSyntaxError, eval_expr, format_expr, parse_expr
from sptcrank.combinatorics import oracle_spt


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out)
    return code, out.getvalue()


def test_verify_filter():
    code, text = run("verify", "--filter", "thm5", "--order", "100")
    assert code == 0
    assert text.count("PASS") == 4


def test_verify_json_schema():
    code, text = run("verify", "--id", "eqintro1", "--order", "60", "--format", "json")
    assert code == 0
    data = json.loads(text)
    assert data["summary"] == {"total": 1, "failed": 0}
    assert set(data["cases"][0]) == {"id", "pass", "order", "first_mismatch", "millis"}


def test_verify_json_is_stable_except_timing():
    reports = []
    for _ in range(2):
        _, text = run("verify", "--filter", "cor6", "--order", "50", "--format", "json")
        data = json.loads(text)
        for c in data["cases"]:
            c.pop("millis")
        reports.append(json.dumps(data))
    assert reports[0] == reports[1]


def test_unknown_id_is_usage_error(capsys):
    code, _ = run("verify", "--id", "nope")
    assert code == 2
    assert "unknown identity" in capsys.readouterr().err


def test_bad_arguments_are_usage_errors():
    assert run("verify")[0] == 2
    assert run("verify", "--id", "eqintro1", "--all")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("table", "--family", "A1", "--max", "x")[0] == 2


def test_congruence_pass_and_fail():
    code, text = run("congruence", "--family", "A5", "--mod", "7", "--residue", "1", "--max", "300")
    assert code == 0 and text.strip().endswith("PASS")
    code, text = run("congruence", "--family", "E2", "--mod", "3", "--residue", "0", "--max", "300")
    assert code == 0 and "equal for all k on the progression: yes" in text
    code, text = run("congruence", "--family", "A1", "--mod", "3", "--residue", "2", "--max", "60", "--format", "json")
    data = json.loads(text)
    assert code == 1 and data["pass"] is False and data["witness"] == 5
    assert run("congruence", "--family", "Q", "--mod", "3", "--residue", "0", "--max", "9")[0] == 2


def test_table_csv_matches_oracle():
    code, text = run("table", "--family", "A1", "--max", "20")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["n", "value"]
    assert [int(r[1]) for r in rows[1:]] == [oracle_spt("A1", n) for n in range(1, 21)]


def test_table_residue_columns_sum_to_value():
    code, text = run("table", "--family", "E4", "--max", "30", "--what", "mresidue", "--mod", "3")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["n", "value", "m0", "m1", "m2"]
    for r in rows:
        assert int(r["m0"]) + int(r["m1"]) + int(r["m2"]) == int(r["value"])
    assert run("table", "--family", "E4", "--max", "5", "--what", "mresidue")[0] == 2


def test_table_c1_c5_agree_on_odd_n():
    _, c1 = run("table", "--family", "C1", "--max", "40", "--format", "json")
    _, c5 = run("table", "--family", "C5", "--max", "40", "--format", "json")
    a, b = json.loads(c1)["rows"], json.loads(c5)["rows"]
    assert all(x["value"] == y["value"] for x, y in zip(a, b) if x["n"] % 2)
    assert any(x["value"] != y["value"] for x, y in zip(a, b) if x["n"] % 2 == 0)


@pytest.mark.parametrize("kind,limit", [("plain", 20), ("A1", 24), ("E2", 24)])
def test_oracle_check(kind, limit):
    code, text = run("oracle-check", "--kind", kind, "--max", str(limit))
    assert code == 0 and "PASS" in text


def test_oracle_check_guard_and_kind():
    assert run("oracle-check", "--kind", "A1", "--max", "40")[0] == 2
    assert run("oracle-check", "--kind", "Z", "--max", "4")[0] == 2


def test_scan_nonneg():
    code, text = run("scan-nonneg", "--family", "E4", "--max", "120")
    assert code == 0 and "no negative" in text
    assert run("scan-nonneg", "--family", "A1", "--max", "10")[0] == 2


def test_negative_entries_detects_negatives():
    # E2 has negative coefficients, which makes it a useful probe of the scanner
    from sptcrank.spt import spt_crank_series

    neg = cli.negative_entries("E2", 10)
    assert neg
    for m, n, v in neg:
        assert v < 0 and spt_crank_series("E2", 10).extract(m, n) == v


def test_eval_pentagonal():
    code, text = run("eval", "--expr", "eta(1)", "--order", "7")
    assert code == 0
    assert text.strip() == "1,-1,-1,0,0,1,0,1"


def test_eval_default_order_from_environment(monkeypatch):
    monkeypatch.setenv("SPTCRANK_ORDER", "3")
    assert run("eval", "--expr", "1/(1-q^1)")[1].strip() == "1,1,1,1"
    monkeypatch.setenv("SPTCRANK_ORDER", "abc")
    assert run("eval", "--expr", "1")[0] == 2


def test_eval_jacobi_quintuple_quotient():
    # jac(1,5) jac(2,5) (q^5;q^5) is (q;q)
    code, text = run("eval", "--expr", "jac(1,5)*jac(2,5)*eta(5) - eta(1)", "--order", "60")
    assert set(text.strip().split(",")) == {"0"}


def test_eval_errors(capsys):
    assert run("eval", "--expr", "1/(1-q^0)")[0] == 2
    assert "not a unit" in capsys.readouterr().err
    assert run("eval", "--expr", "1+*q")[0] == 2
    assert "position 2" in capsys.readouterr().err


def test_parse_errors_carry_position():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("poch(q^1,2,x)")
    assert err.value.pos == 11
    with pytest.raises(ExprSyntaxError):
        parse_expr("eta(1")
    with pytest.raises(ExprSyntaxError):
        parse_expr("foo(1)")
    with pytest.raises(ExprSyntaxError):
        parse_expr("2 $ 3")


def test_eval_semantics():
    assert eval_expr(parse_expr("poch(-q^1,1,2)"), 5).coeffs() == [1, 1, 1, 1, 0, 0]
    assert eval_expr(parse_expr("(1-q^1)^-1"), 4).coeffs() == [1] * 5
    assert eval_expr(parse_expr("-q^2+3"), 3).coeffs() == [3, 0, -1, 0]
    with pytest.raises(ExprEvalError):
        eval_expr(parse_expr("jac(5,5)"), 5)
    with pytest.raises(ExprEvalError):
        eval_expr(parse_expr("q^1^-1"), 5)


atoms = st.one_of(
    st.integers(0, 50).map(str),
    st.integers(0, 9).map(lambda e: f"q^{e}"),
    st.tuples(st.sampled_from(["", "-"]), st.integers(0, 5), st.integers(1, 4), st.one_of(st.integers(0, 5).map(str), st.just("inf"))).map(
        lambda t: f"poch({t[0]}q^{t[1]},{t[2]},{t[3]})"
    ),
    st.integers(1, 6).map(lambda a: f"jac({a},7)"),
    st.integers(1, 5).map(lambda m: f"eta({m})"),
    st.just("lambert(1,0,0,1,1)"),
)


def _combine(children):
    return st.one_of(
        st.tuples(children, st.sampled_from("+-*/"), children).map(lambda t: f"{t[0]}{t[1]}{t[2]}"),
        children.map(lambda c: f"({c})"),
        st.tuples(children, st.integers(-3, 3)).map(lambda t: f"({t[0]})^{t[1]}"),
    )


expressions = st.recursive(atoms, _combine, max_leaves=8)


@given(expressions)
def test_parse_print_roundtrip(text):
    tree = parse_expr(text)
    assert parse_expr(format_expr(tree)) == tree
