"""One pass/fail line per acceptance criterion.  Each test prints its line and then
asserts the verdict, so known failures show up as failing tests (see the ledger)."""

import json
import time
from fractions import Fraction
from pathlib import Path

import pytest

from dihedral_bmw import algebra_span as A
from dihedral_bmw.lk_even import (aij_closed, aij_from_rep, build_even_rep, build_sequences,
                                  check_invariance_even, gram_even, irreducibility_certificate_even, limit_pattern,
                                  sequence_identities_check, psi_automorphism_check, swap_parameters, inverse_expansion_check,
                                  verify_relations_even)
from dihedral_bmw.lk_odd import (alpha_closed_form, build_odd_rep, degeneration_check, delta0_matrix,
                                 eval_word, gram_odd, invariance_defects, invariant_form_dimension,
                                 irreducibility_certificate_odd, projector_alpha, verify_relations_odd)
from dihedral_bmw.presentations import CoxeterMatrix, bmw_presentation, export_presentation, rank2_consistency
from dihedral_bmw.ringcore import EVEN, conjugate, m_even
from dihedral_bmw.words import X0, X1, alternating

from test_lk_odd import DELTA5, DELTA7

SEED = 0xB3B0
ROOT = Path(__file__).resolve().parent.parent


def report_line(capsys, k, ok, detail):
    with capsys.disabled():
        print(f"\nACCEPTANCE {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def test_criterion_01_odd_relations(capsys):
    t = time.perf_counter()
    bad = {n: sorted({r.rid for r in verify_relations_odd(build_odd_rep(n)).failures()}) for n in range(1, 6)}
    secs = time.perf_counter() - t
    ok = not any(bad.values()) and secs < 60
    report_line(capsys, 1, ok, f"odd relations n=1..5, failures={ {k: v for k, v in bad.items() if v} }, {secs:.1f}s")
    assert ok


def test_criterion_02_delta0(capsys):
    ok = True
    for n in range(1, 6):
        rep = build_odd_rep(n)
        d = delta0_matrix(n)
        ok &= eval_word(rep, alternating(X0, X1, 2 * n + 1)) == d == eval_word(rep, alternating(X1, X0, 2 * n + 1))
    shown = delta0_matrix(2) == DELTA5 and delta0_matrix(3) == DELTA7
    report_line(capsys, 2, ok and shown, f"braid words = Delta0 for n=1..5: {ok}; displayed 5x5/7x7 match: {shown}")
    assert ok and shown


def test_criterion_03_projector(capsys):
    res = {n: projector_alpha(build_odd_rep(n)) == alpha_closed_form(n) for n in range(1, 6)}
    report_line(capsys, 3, all(res.values()), f"projector coefficients = closed form: {res}")
    assert all(res.values())


def test_criterion_04_odd_form(capsys):
    inv = {n: all(d.is_zero() for d in invariance_defects(build_odd_rep(n), gram_odd(n)).values())
           for n in range(1, 6)}
    dims = {n: invariant_form_dimension(build_odd_rep(n), SEED)[0] for n in (1, 2)}
    ok = all(inv.values()) and all(d == 1 for d in dims.values())
    report_line(capsys, 4, ok, f"invariance {inv}; invariant-form dimension {dims}")
    assert ok


def test_criterion_05_odd_irreducible(capsys):
    certs = {n: irreducibility_certificate_odd(build_odd_rep(n), SEED) for n in range(1, 6)}
    ok = all(c["certified"] for c in certs.values())
    report_line(capsys, 5, ok, "det certificates " + ", ".join(f"n={n}:{c['method']}" for n, c in certs.items()))
    assert ok


def test_criterion_06_sequences(capsys):
    s = build_sequences(EVEN, 8)
    m0, m1, vi = m_even(EVEN, 0), m_even(EVEN, 1), EVEN.var("v0", -1)
    listed = (s.b[2:5] == [-m1 * vi, -m0 * m1 * vi + m1, m1 * m1 * vi * vi - m0 * vi]
              and s.a[2:5] == [-m1 * vi, -m1 * m1 * vi + m0, m1 * m1 * vi * vi - m0 * vi])
    ident = sequence_identities_check(EVEN, 6).all_passed
    report_line(capsys, 6, listed and ident, f"listed b2..b4, a2..a4 match: {listed}; identities k<=6: {ident}")
    assert listed and ident


def test_criterion_07_even_relations(capsys):
    rel_fail, exp_fail, psi_fail = {}, {}, {}
    for n in range(2, 7):
        r0, r1 = build_even_rep(n, 0), build_even_rep(n, 1)
        f = sorted({(r.rid, dict(r.index).get("rep")) for r in verify_relations_even(r0, r1).failures()})
        if f:
            rel_fail[n] = f
        e = [dict(r.index)["length"] for r in inverse_expansion_check(r0, 6).failures()]
        if e:
            exp_fail[n] = e
        if not psi_automorphism_check(n).all_passed:
            psi_fail[n] = True
    tied_ok = all(verify_relations_even(build_even_rep(n, 0, EVEN, True), build_even_rep(n, 1, EVEN, True)).all_passed
                  for n in (3, 5))
    ok = not (rel_fail or exp_fail or psi_fail)
    report_line(capsys, 7, ok, f"relation failures {rel_fail} (all pass on v1=v0: {tied_ok}); "
                               f"expansion failures by length {exp_fail}; negative-word sandwich failures {psi_fail}")
    assert ok


def test_criterion_08_even_projectors(capsys):
    aij, form = {}, {}
    for n in range(2, 6):
        r0, r1 = build_even_rep(n, 0), build_even_rep(n, 1)
        C = aij_closed(n)
        sym = all(C.rows[j][i] == conjugate(EVEN, C.rows[i][j]) for i in range(n) for j in range(n))
        aij[n] = aij_from_rep(r0) == C and aij_from_rep(r1) == C.map(swap_parameters) and sym
        form[n] = check_invariance_even(r0, gram_even(n, 0)) and check_invariance_even(r1, gram_even(n, 1))
    lp = {}
    cert_ok = True
    for n in range(2, 6):
        c = irreducibility_certificate_even(build_even_rep(n, 0), SEED)
        cert_ok &= c["certified"]
        lp[n] = (c["limit_pattern"]["offdiag_near_limit_set"], c["limit_pattern"]["diag_exceeds_1000"],
                 c["limit_pattern"]["diag"][0])
    half_eps = limit_pattern(aij_closed(2), Fraction(1, 2000))["diag"][0]
    lim_ok = all(a and b for a, b, _ in lp.values())
    ok = all(aij.values()) and all(form.values()) and cert_ok and lim_ok
    report_line(capsys, 8, ok, f"a_ij match {aij}; invariance {form}; det certified {cert_ok}; "
                               f"limit at eps=1/1000 (offdiag ok, diag>1000, diag) {lp}; diag at eps=1/2000: {half_eps}")
    assert ok


CASES = [("odd", 1), ("odd", 2), ("odd", 3), ("even", 2), ("even", 3)]


def test_criterion_09_dimensions(capsys):
    res = {}
    for case, n in CASES:
        alg = A.get_algebra(case, n)
        res[f"{case}{n}"] = (alg.dim, A.dimension_report(alg, SEED).all_passed,
                             A.associativity_check(alg, SEED).all_passed)
    want = {"odd1": 15, "odd2": 35, "odd3": 63, "even2": 16, "even3": 30}
    ok = all(res[k][0] == want[k] and res[k][1] and res[k][2] for k in want)
    tied = A.get_algebra("even", 3, True)
    tied_ok = A.dimension_report(tied, SEED).all_passed and A.associativity_check(tied, SEED).all_passed
    report_line(capsys, 9, ok, f"(dim, words reduce, associative) {res}; even3 on v1=v0: {tied_ok}")
    assert ok


def test_criterion_10_quotients(capsys):
    res = {f"{c}{n}": (A.hecke_quotient_check(c, n).all_passed, A.star_involution(c, n, SEED).all_passed,
                       A.psi_conjugation_check(c, n).all_passed) for c, n in CASES}
    ok = all(all(v) for v in res.values())
    report_line(capsys, 10, ok, f"(hecke, star, psi) {res}")
    assert ok


def test_criterion_11_cellular_layer(capsys):
    res = {f"{c}{n}": A.cellular_lk_layer(c, n).all_passed for c, n in CASES}
    ok = all(res.values())
    report_line(capsys, 11, ok, f"LK layer coefficients independent of k and equal to LK rows: {res}")
    assert ok


def test_criterion_12_degeneration(capsys):
    res = {n: degeneration_check(n).all_passed for n in range(1, 6)}
    ok = all(res.values())
    report_line(capsys, 12, ok, f"l->1, m->0: involutive X and Brauer shapes with mu=1: {res}")
    assert ok


def test_criterion_13_general_gamma(capsys):
    rank2 = {m: sorted({r.rid for r in rank2_consistency(m).failures()}) for m in range(3, 10)}
    golden = {}
    for name in ("i2_3", "i2_4", "a2_a1"):
        g = CoxeterMatrix.from_json((ROOT / "data" / "coxeter" / f"{name}.json").read_text())
        text = export_presentation(bmw_presentation(g), "json")
        golden[name] = text == (ROOT / "tests" / "golden" / f"{name}.bmw.json").read_text()
    ok = not any(rank2.values()) and all(golden.values())
    report_line(capsys, 13, ok, f"rank-2 failing ids by m {rank2} "
                                f"(m=6 on v1=v0: {rank2_consistency(6, tied=True).all_passed}); golden {golden}")
    assert ok
