import pytest

from dihedral_bmw.lk_odd import (alpha_closed_form, build_odd_rep, degeneration_check, delta0_matrix,
                                 determinant_certificate, eval_word, gram_odd, invariance_defects,
                                 invariant_form_dimension, irreducibility_certificate_odd, projector_alpha,
                                 verify_relations_odd)
from dihedral_bmw.matcore import SquareMatrix
from dihedral_bmw.ringcore import ODD
from dihedral_bmw.words import X0, X1, alternating

SEED = 0xB3B0


def displayed(rows):
    m, l = ODD.var("m"), ODD.var("l")
    val = {"0": ODD.zero(), "l": l, "ml": m * l, "-ml": -m * l}
    return SquareMatrix(ODD, [[val[x] for x in r.split()] for r in rows])


# Delta_0 for 2n+1 = 5 and 7 as displayed with the construction (independent oracle)
DELTA5 = displayed(["0 0 0 0 l", "ml 0 0 l -ml", "0 ml l -ml 0", "ml l 0 0 -ml", "l 0 0 0 0"])
DELTA7 = displayed(["0 0 0 0 0 0 l", "ml 0 0 0 0 l -ml", "0 ml 0 0 l -ml 0", "ml 0 ml l -ml 0 -ml",
                    "0 ml l 0 0 -ml 0", "ml l 0 0 0 0 -ml", "l 0 0 0 0 0 0"])


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_relations_hold(n):
    report = verify_relations_odd(build_odd_rep(n))
    assert report.all_passed, [r.rid for r in report.failures()]
    assert {"R1", "R9", "R10", "T1", "T3", "INV", "D0"} <= report.ids()


@pytest.mark.parametrize("n,want", [(2, DELTA5), (3, DELTA7)])
def test_delta0_matches_displayed(n, want):
    assert delta0_matrix(n) == want
    rep = build_odd_rep(n)
    assert eval_word(rep, alternating(X0, X1, 2 * n + 1)) == want
    assert eval_word(rep, alternating(X1, X0, 2 * n + 1)) == want


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_projector_closed_form_and_form(n):
    rep = build_odd_rep(n)
    assert projector_alpha(rep) == alpha_closed_form(n)
    defects = invariance_defects(rep, gram_odd(n))
    assert all(d.is_zero() for d in defects.values())


def test_wrong_form_is_not_invariant():
    rep = build_odd_rep(2)
    assert not all(d.is_zero() for d in invariance_defects(rep, alpha_closed_form(2)).values())


@pytest.mark.parametrize("n", [1, 2])
def test_invariant_form_unique(n):
    dim, _ = invariant_form_dimension(build_odd_rep(n), SEED)
    assert dim == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_irreducibility_certificate(n):
    cert = irreducibility_certificate_odd(build_odd_rep(n), SEED)
    assert cert["certified"]
    assert cert["method"] == ("symbolic" if 2 * n + 1 <= 7 else "points")
    if cert["method"] == "points":
        assert sum(p["det"] != "0" for p in cert["points"]) >= 3


def test_certificate_rejects_singular_matrix():
    A = SquareMatrix(ODD, [[1, 1], [1, 1]])
    assert not determinant_certificate(A, SEED)["certified"]


def test_seed_changes_points_not_verdict():
    rep = build_odd_rep(4)
    a = irreducibility_certificate_odd(rep, SEED)
    b = irreducibility_certificate_odd(rep, SEED + 1)
    assert a["points"] != b["points"] and a["certified"] == b["certified"]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_degeneration_to_brauer(n):
    report = degeneration_check(n)
    assert report.all_passed, [r.rid for r in report.failures()]
