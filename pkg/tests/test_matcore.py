import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from dihedral_bmw.matcore import (CapExceeded, SingularMatrixError, SquareMatrix, det_at_points, det_exact,
                                  evaluate_matrix, inverse, mat_mul, matrix_from_json, matrix_to_json,
                                  rational_det, rational_rank, rational_solve, size_caps)
from dihedral_bmw.ringcore import ODD, evaluate


def random_matrix(seed, dim):
    rng = random.Random(seed)
    m, l = ODD.var("m"), ODD.var("l")
    pool = [ODD(0), ODD(1), ODD(-2), m, l, l.invert(), m * l - 1, m + l.invert()]
    return SquareMatrix(ODD, [[rng.choice(pool) for _ in range(dim)] for _ in range(dim)])


@given(st.integers(0, 10_000), st.integers(1, 4))
def test_det_exact_matches_sympy_at_a_point(seed, dim):
    A = random_matrix(seed, dim)
    point = {"m": Fraction(2, 7), "l": Fraction(-3, 5)}
    want = sp.Matrix(evaluate_matrix(A, point)).applyfunc(sp.Rational).det()
    assert evaluate(det_exact(A), point) == Fraction(int(want.p), int(want.q))


@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=4, max_size=4))
def test_rational_det_and_rank_match_sympy(rows):
    M = sp.Matrix(rows)
    assert rational_det(rows) == int(M.det())
    assert rational_rank(rows) == M.rank()


def test_inverse_and_solve():
    A = random_matrix(3, 3)
    if det_exact(A).is_zero():
        A = A + SquareMatrix.identity(ODD, 3)
    assert mat_mul(A, inverse(A)) == SquareMatrix.identity(ODD, 3)
    rows = [[2, 1], [1, 3]]
    x = rational_solve(rows, [3, 5])
    assert [2 * x[0] + x[1], x[0] + 3 * x[1]] == [3, 5]
    with pytest.raises(SingularMatrixError):
        inverse(SquareMatrix.zeros(ODD, 2))


def test_json_round_trip():
    A = random_matrix(7, 3)
    assert matrix_from_json(ODD, matrix_to_json(A)) == A


def test_caps(monkeypatch):
    monkeypatch.setenv("BMW_CHECK_CAP", "det=2")
    assert size_caps()["det"] == 2
    with pytest.raises(CapExceeded):
        det_exact(random_matrix(1, 3))
    monkeypatch.setenv("BMW_CHECK_CAP", "bogus=1")
    with pytest.raises(ValueError):
        size_caps()


def test_seeded_points_are_reproducible():
    A = random_matrix(11, 3)
    assert det_at_points(A, 5) == det_at_points(A, 5)
    assert det_at_points(A, 5) != det_at_points(A, 6)
