"""Acceptance criteria 1-13, exact equality throughout.

Each test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary under "acceptance criteria".
"""

from __future__ import annotations

import io
import json
import time

import pytest

from conftest import CRITERIA
from sptcrank import bailey, cli, identities, spt
from sptcrank.combinatorics import oracle_spt
from sptcrank.qseries import first_mismatch

ROOT_LIMITS = {3: 900, 5: 750, 7: 700}
PAIR_KINDS = ("A1", "A3", "A5", "A7")


@pytest.fixture
def report(request):
    label = request.node.name.removeprefix("test_")
    state = {"detail": ""}
    yield state
    failed = getattr(request.node, "rep_call", None)
    ok = failed is not None and failed.passed
    line = f"{label}: {'PASS' if ok else 'FAIL'}{' ' + state['detail'] if state['detail'] else ''}"
    print(line)
    CRITERIA.append(line)


def _verify_group(cases, order=None):
    reports = [identities.verify(c, order) for c in cases]
    bad = [(r.id, r.first_mismatch, r.vanishing_failures) for r in reports if not r.passed]
    return reports, bad


def test_criterion_01_bailey_pair_definition(report):
    start = time.perf_counter()
    failures = {}
    for name in bailey.PAIR_NAMES:
        rep = bailey.verify_pair(bailey.registry_lookup(name), 40, 200)
        if not rep.passed:
            failures[name] = rep.first_failure
    elapsed = time.perf_counter() - start
    report["detail"] = f"10 pairs, n <= 40, order 200, {elapsed:.1f}s"
    assert len(bailey.PAIR_NAMES) == 10
    assert not failures
    assert elapsed < 30


def test_criterion_02_bailey_lemma_transforms(report):
    count = 0
    bad = []
    for name in bailey.PAIR_NAMES:
        pair = bailey.registry_lookup(name)
        for variant in bailey.applicable_variants(pair):
            lhs, rhs = bailey.bailey_limit(pair, variant, 200)
            count += 1
            if first_mismatch(lhs, rhs) is not None:
                bad.append((name, variant))
    report["detail"] = f"{count} (pair, variant) combinations at order 200"
    assert not bad


def test_criterion_03_congruences(report):
    start = time.perf_counter()
    bad = []
    for X, t, r in spt.CONGRUENCES:
        series = spt.spt_series(X, 1500)
        bad += [(X, t, n) for n in range(r, 1501, t) if series[n] % t]
    elapsed = time.perf_counter() - start
    report["detail"] = f"10 congruences, n <= 1500, {elapsed:.1f}s"
    assert len(spt.CONGRUENCES) == 10
    assert not bad
    assert elapsed < 120


def test_criterion_04_root_of_unity_vanishing(report):
    bad = []
    for X, t, r in spt.CONGRUENCES:
        bad += [(X, t, n) for n in spt.root_vanishing(X, t, r, ROOT_LIMITS[t])]
    assert ("A3", 5, 1) in spt.CONGRUENCES and ("C1", 5, 3) in spt.CONGRUENCES
    report["detail"] = "t=3 to 900, t=5 to 750, t=7 to 700"
    assert not bad


def test_criterion_05_bivariate_series(report):
    reports, bad = _verify_group(identities.select("thm2"), 200)
    assert all(isinstance(identities.get_case(r.id).lhs_builder(8), identities.ZQSeries) for r in reports)
    report["detail"] = f"{len(reports)} bivariate identities to order 200"
    assert len(reports) == 8 and not bad


def test_criterion_06_hecke_rogers(report):
    reports, bad = _verify_group(identities.select("cor3"), 200)
    report["detail"] = f"{len(reports)} identities to order 200"
    assert len(reports) == 4 and not bad


def test_criterion_07_products(report):
    cases = identities.select("cor4") + identities.select("cor6")
    reports, bad = _verify_group(cases, 400)
    report["detail"] = f"{len(reports)} product identities to order 400"
    assert len(reports) == 10 and not bad


def test_criterion_08_root_dissections(report):
    reports, bad = _verify_group(identities.select("thm5"), 250)
    vanishing = {r.id: identities.get_case(r.id).vanishing for r in reports}
    assert vanishing == {"thm5.c1": (5, 3), "thm5.c5": (5, 3), "thm5.e2": (3, 0), "thm5.e4": (3, 1)}
    assert all(r.vanishing_failures == [] for r in reports)
    report["detail"] = "4 dissections to order 250 with progression vanishing"
    assert len(reports) == 4 and not bad


def test_criterion_09_seven_dissection(report):
    case = identities.get_case("sec4.a5zeta7")
    r = identities.verify(case, 300)
    assert case.vanishing == (7, 1) and case.vanishing_order >= 700
    report["detail"] = "order 300, no q^(7N+1) to 700"
    assert r.passed and r.vanishing_failures == []


def test_criterion_10_c1_c5_relations(report):
    reports, bad = _verify_group(identities.select("cor7"), 600)
    spt_plain = spt.spt_series("plain", 300)
    c1, c5 = spt.spt_series("C1", 600), spt.spt_series("C5", 600)
    direct = [n for n in range(1, 301) if spt_plain[n] != c1[2 * n] - c5[2 * n]]
    assert spt_plain[4] == 10 == c1[8] - c5[8]
    report["detail"] = "4 relations for 2n, 2n+1 <= 600; spt(4) = 10"
    assert len(reports) == 4 and not bad and not direct


def test_criterion_11_oracle_equivalence(report):
    bad = []
    for kind in ("plain", "bar", "M2", "A1", "A3", "A5", "A7", "C1", "C5", "E2", "E4"):
        limit = 24 if kind in PAIR_KINDS else 30
        series = spt.spt_series(kind, limit)
        bad += [(kind, n) for n in range(1, limit + 1) if series[n] != oracle_spt(kind, n)]
    assert spt.spt_series("plain", 4)[4] == 10
    assert spt.spt_series("bar", 3)[3] == 6
    assert spt.spt_series("M2", 6)[6] == 5
    report["detail"] = "11 kinds, n <= 24 (pairs) / 30 (others)"
    assert not bad


def test_criterion_12_nonnegativity(report):
    e4 = cli.negative_entries("E4", 300)
    c1 = cli.negative_entries("C1", 200)
    c5 = cli.negative_entries("C5", 200)
    report["detail"] = (
        f"E4 negatives to 300: {len(e4)}; "
        f"C1 negatives to 200: {len(c1)} (reported); C5 negatives to 200: {len(c5)} (reported)"
    )
    assert not e4


def test_criterion_13_whole_suite_budget(report):
    out = io.StringIO()
    start = time.perf_counter()
    code = cli.main(["verify", "--all", "--format", "json"], out)
    elapsed = time.perf_counter() - start
    data = json.loads(out.getvalue())
    report["detail"] = f"{data['summary']['total']} cases, {data['summary']['failed']} failed, {elapsed:.1f}s"
    assert code == 0
    assert data["summary"]["failed"] == 0
    assert elapsed < 600
