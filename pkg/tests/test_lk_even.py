from fractions import Fraction

import pytest

from dihedral_bmw.lk_even import (aij_closed, aij_from_rep, build_even_rep, build_sequences,
                                  check_invariance_even, delta_cycle_check, gram_even,
                                  irreducibility_certificate_even, sequence_identities_check, limit_pattern,
                                  psi_automorphism_check, swap_parameters, inverse_expansion_check,
                                  verify_relations_even)
from dihedral_bmw.ringcore import EVEN, conjugate, m_even

SEED = 0xB3B0
v0, v1 = EVEN.var("v0"), EVEN.var("v1")
m0, m1 = m_even(EVEN, 0), m_even(EVEN, 1)


def pair(n, tied=False):
    return build_even_rep(n, 0, EVEN, tied), build_even_rep(n, 1, EVEN, tied)


def test_listed_sequence_values():
    s = build_sequences(EVEN, 8)
    vi = v0.invert()
    assert s.b[2:5] == [-m1 * vi, -m0 * m1 * vi + m1, m1 * m1 * vi * vi - m0 * vi]
    assert s.a[2:5] == [-m1 * vi, -m1 * m1 * vi + m0, m1 * m1 * vi * vi - m0 * vi]


def test_literal_b_rule_disagrees_with_listed_b3():
    literal = build_sequences(EVEN, 8, "literal")
    assert literal.b[3] != -m0 * m1 * v0.invert() + m1


def test_second_order_recursion():
    s = build_sequences(EVEN, 30)
    vi = v0.invert()
    for i in range(1, 16):
        assert s.a[2 * i] == s.b[2 * i]
    for i in range(2, 15):
        assert s.a[2 * i + 1] == -m1 * vi * s.a[2 * i - 1] + (1 - m0 * vi) * s.a[2 * i - 3]


def test_primed_sequences_are_an_involution():
    s = build_sequences(EVEN, 10)
    assert [swap_parameters(x) for x in s.a_primed] == s.a


def test_sequence_identities():
    report = sequence_identities_check(EVEN, 6)
    assert report.all_passed
    assert report.ids() == {"S1", "S2", "S3", "S2'", "S3'"}


@pytest.mark.parametrize("n", [2, 4, 6])
def test_relations_hold_for_even_n(n):
    r0, r1 = pair(n)
    report = verify_relations_even(r0, r1)
    assert report.all_passed, sorted({(r.rid, r.index) for r in report.failures()})
    assert "DS" in report.ids()


@pytest.mark.parametrize("n", [3, 5])
def test_odd_n_fails_only_invertibility_generically(n):
    # Documented defect: with n odd the last row of X1 (X0 on the mirror) is incompatible
    # with X X^-1 = 1 unless v1 = v0.  Every other relation holds.
    r0, r1 = pair(n)
    report = verify_relations_even(r0, r1)
    failing = {(r.rid, dict(r.index)["i"], dict(r.index)["rep"]) for r in report.failures()}
    assert failing == {("INV", 1, 0), ("INV", 0, 1)}


@pytest.mark.parametrize("n", [3, 5])
def test_odd_n_holds_on_tied_locus(n):
    r0, r1 = pair(n, tied=True)
    assert verify_relations_even(r0, r1).all_passed


@pytest.mark.parametrize("n", [2, 4, 6])
def test_delta_cycle(n):
    report = delta_cycle_check(build_even_rep(n, 0))
    assert len(report) == n // 2 + 1 and report.all_passed


@pytest.mark.parametrize("n,tied", [(2, False), (3, True), (4, False), (5, True), (6, False)])
def test_expansions_inside_window(n, tied):
    report = inverse_expansion_check(build_even_rep(n, 0, EVEN, tied), 6)
    inside = [r for r in report.records if ("window", "inside") in r.index]
    assert len(inside) == 2 * n and all(r.passed for r in inside)


@pytest.mark.parametrize("n", [2, 4])
def test_expansions_beyond_window_fail(n):
    # Observed behaviour recorded in the ledger: lengths >= 2n do not expand this way.
    report = inverse_expansion_check(build_even_rep(n, 0), 6)
    beyond = [r for r in report.records if ("window", "beyond") in r.index]
    assert beyond and not any(r.passed for r in beyond)


@pytest.mark.parametrize("n,tied", [(2, False), (3, True), (4, False), (5, True), (6, False)])
def test_psi_images(n, tied):
    assert psi_automorphism_check(n, EVEN, tied).all_passed


@pytest.mark.parametrize("n,tied", [(2, False), (3, True), (4, False), (5, True)])
def test_projector_coefficients_and_form(n, tied):
    r0, r1 = pair(n, tied)
    A = aij_closed(n)
    assert aij_from_rep(r0) == A.map(r0.spec)
    assert aij_from_rep(r1) == A.map(swap_parameters).map(r1.spec)
    for i in range(n):
        for j in range(n):
            assert A.rows[j][i] == conjugate(EVEN, A.rows[i][j])
    assert check_invariance_even(r0, gram_even(n, 0))
    assert check_invariance_even(r1, gram_even(n, 1))


def test_perturbed_form_is_not_invariant():
    r0 = build_even_rep(2, 0)
    G = gram_even(2, 0)
    bad = G.map(lambda x: x * 2 if x == G.rows[0][1] else x)
    assert not check_invariance_even(r0, bad)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_certificate_and_limit_pattern(n):
    cert = irreducibility_certificate_even(build_even_rep(n, 0, EVEN, n % 2 == 1), SEED)
    assert cert["certified"]
    lp = cert["limit_pattern"]
    assert lp["offdiag_near_limit_set"]
    # observed: diagonals tend to about 751 at eps = 1/1000, below the claimed 10^3
    assert [Fraction(x) for x in lp["diag"]] == [Fraction(501167, 667)] * n
    assert not lp["diag_exceeds_1000"]


def test_limit_pattern_offdiagonal_values():
    lp = limit_pattern(aij_closed(2))
    assert Fraction(lp["offdiag"]["0,1"]) == Fraction(3001, 2002)
    assert Fraction(lp["offdiag"]["1,0"]) == Fraction(3001, 1000)
