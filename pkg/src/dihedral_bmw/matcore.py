"""Dense square matrices of Scalars and the exact linear algebra built on them.

Row convention throughout: row i of the matrix of A lists the coefficients of
A.v_i, so the matrix of a product AB is M(B) @ M(A).
"""

from __future__ import annotations

import json
import os
import random
from fractions import Fraction
from typing import Iterable, Sequence

from .ringcore import (PoleError, RingContext, Scalar, _from_sympy, _make,
                       _to_sympy, canonical_string, conjugate, evaluate,
                       parse_scalar, scalar_sum)

DEFAULT_DET_CAP = 7


def size_caps() -> dict:
    """Size caps, overridable through BMW_CHECK_CAP ("det=9,sc=5")."""
    caps = {"det": DEFAULT_DET_CAP, "sc": 4}
    raw = os.environ.get("BMW_CHECK_CAP", "").strip()
    if raw:
        for part in raw.split(","):
            key, _, val = part.partition("=")
            if not _:
                raise ValueError(f"BMW_CHECK_CAP entries look like det=7, got {part!r}")
            key = key.strip()
            if key not in caps:
                raise ValueError(f"unknown cap {key!r} in BMW_CHECK_CAP")
            caps[key] = int(val)
    return caps


class SingularMatrixError(ArithmeticError):
    pass


class CapExceeded(RuntimeError):
    pass


class SamplingError(RuntimeError):
    pass


class SquareMatrix:
    __slots__ = ("ctx", "dim", "rows")

    def __init__(self, ctx: RingContext, rows: Sequence[Sequence]):
        rows = tuple(tuple(ctx(x) for x in r) for r in rows)
        dim = len(rows)
        if dim < 1:
            raise ValueError("matrix dimension must be at least 1")
        for r in rows:
            if len(r) != dim:
                raise ValueError("matrix is not square")
        self.ctx = ctx
        self.dim = dim
        self.rows = rows

    @classmethod
    def identity(cls, ctx: RingContext, dim: int) -> "SquareMatrix":
        one, zero = ctx.one(), ctx.zero()
        return cls(ctx, [[one if i == j else zero for j in range(dim)] for i in range(dim)])

    @classmethod
    def zeros(cls, ctx: RingContext, dim: int) -> "SquareMatrix":
        zero = ctx.zero()
        return cls(ctx, [[zero] * dim for _ in range(dim)])

    @classmethod
    def from_sparse_rows(cls, ctx: RingContext, dim: int, rows: Sequence[dict]) -> "SquareMatrix":
        """rows[i] maps column -> value; repeated contributions must be pre-summed."""
        zero = ctx.zero()
        return cls(ctx, [[ctx(r.get(j, 0)) if j in r else zero for j in range(dim)] for r in rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.dim == other.dim and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(canonical_string(x) for x in r) for r in self.rows)
        return f"SquareMatrix[{body}]"

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "SquareMatrix") -> "SquareMatrix":
        return mat_add(self, other)

    def __sub__(self, other: "SquareMatrix") -> "SquareMatrix":
        return mat_add(self, mat_scalar_mul(other, -1))

    def __mul__(self, c) -> "SquareMatrix":
        return mat_scalar_mul(self, c)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def nonzero_entries(self) -> list:
        return [(i, j, x) for i, r in enumerate(self.rows) for j, x in enumerate(r) if x]

    def map(self, f, ctx: RingContext | None = None) -> "SquareMatrix":
        return SquareMatrix(ctx or self.ctx, [[f(x) for x in r] for r in self.rows])


def _check_compatible(a: SquareMatrix, b: SquareMatrix) -> None:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch {a.dim} vs {b.dim}")
    if a.ctx != b.ctx:
        raise ValueError("context mismatch")


def mat_mul(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    _check_compatible(a, b)
    n = a.dim
    bsparse = [[(j, x) for j, x in enumerate(r) if x] for r in b.rows]
    out = []
    for r in a.rows:
        acc: list = [[] for _ in range(n)]
        for k, x in enumerate(r):
            if not x:
                continue
            for j, y in bsparse[k]:
                acc[j].append(x * y)
        out.append([scalar_sum(t, a.ctx) if t else a.ctx.zero() for t in acc])
    return SquareMatrix(a.ctx, out)


def mat_product(mats: Iterable[SquareMatrix], ctx: RingContext, dim: int) -> SquareMatrix:
    out = None
    for m in mats:
        out = m if out is None else mat_mul(out, m)
    return out if out is not None else SquareMatrix.identity(ctx, dim)


def mat_add(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    _check_compatible(a, b)
    return SquareMatrix(a.ctx, [[x + y for x, y in zip(r, s)] for r, s in zip(a.rows, b.rows)])


def mat_scalar_mul(a: SquareMatrix, c) -> SquareMatrix:
    c = a.ctx(c)
    return SquareMatrix(a.ctx, [[c * x for x in r] for r in a.rows])


def transpose(a: SquareMatrix) -> SquareMatrix:
    return SquareMatrix(a.ctx, list(zip(*a.rows)))


def entrywise_conjugate(a: SquareMatrix) -> SquareMatrix:
    return a.map(lambda x: conjugate(a.ctx, x))


def evaluate_matrix(a: SquareMatrix, point) -> list:
    return [[evaluate(x, point) for x in r] for r in a.rows]


# --------------------------------------------------------------- determinants

def det_exact(a: SquareMatrix, cap: int | None = None) -> Scalar:
    """Fraction-free (Bareiss) elimination over cleared-denominator polynomials."""
    if cap is None:
        cap = size_caps()["det"]
    if a.dim > cap:
        raise CapExceeded(f"dimension {a.dim} exceeds the symbolic determinant cap {cap}; "
                          "use det_at_points instead")
    ctx = a.ctx
    nv = ctx.nvars
    R = ctx.poly_ring
    n = a.dim
    rows = []
    scale = ctx.one()
    for r in a.rows:
        # common denominator of the row, and the Laurent shift making it polynomial
        den = R.one
        for x in r:
            if x:
                d = _to_sympy(ctx, x.den)
                den = den.lcm(d)
        den_s = _make(ctx, _from_sympy(den), {ctx.zero_exp: 1})
        cleared = [x * den_s for x in r]
        mins = [0] * nv
        for x in cleared:
            for e in x.num:
                for i in range(nv):
                    if e[i] < mins[i]:
                        mins[i] = e[i]
        shift = [-m for m in mins]
        mono = _make(ctx, {tuple(shift): 1}, {ctx.zero_exp: 1})
        polys = []
        for x in cleared:
            x = x * mono
            # now x.den is an integer constant
            c = x.den[ctx.zero_exp] if x.num else 1
            if c != 1:
                raise AssertionError("row clearing left a nontrivial denominator")
            polys.append(_to_sympy(ctx, x.num) if x.num else R.zero)
        rows.append(polys)
        scale = scale * den_s * mono
    sign = 1
    prev = R.one
    m = [list(r) for r in rows]
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return ctx.zero()
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exquo(prev)
            m[i][k] = R.zero
        prev = m[k][k]
    d = m[n - 1][n - 1]
    if d == 0:
        return ctx.zero()
    det = _make(ctx, _from_sympy(d), {ctx.zero_exp: 1})
    return det * sign / scale


def rational_det(rows: list) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return det


def rational_rank(rows: list) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][c]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / p
                for j in range(c, ncols):
                    m[i][j] -= f * m[rank][j]
        rank += 1
        if rank == len(m):
            break
    return rank


def rational_solve(a: list, b: list) -> list:
    """Solve a x = b over Q (a square, invertible)."""
    n = len(a)
    m = [list(map(Fraction, r)) + [Fraction(bi)] for r, bi in zip(a, b)]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            raise SingularMatrixError("singular rational system")
        m[k], m[piv] = m[piv], m[k]
        p = m[k][k]
        m[k] = [x / p for x in m[k]]
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return [m[i][n] for i in range(n)]


def sample_point(ctx: RingContext, rng: random.Random) -> dict:
    """A random point with coordinates p/q, 1 <= p, q <= 13, p and q odd."""
    odds = list(range(1, 14, 2))
    point = {}
    for v in ctx.variables:
        p, q = rng.choice(odds), rng.choice(odds)
        sign = rng.choice((1, -1))
        point[v] = Fraction(sign * p, q)
    return point


def det_at_points(a: SquareMatrix, seed: int, k: int = 5, max_tries: int = 200) -> list:
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < k and tries < max_tries:
        tries += 1
        point = sample_point(a.ctx, rng)
        try:
            vals = evaluate_matrix(a, point)
        except PoleError:
            continue
        out.append((point, rational_det(vals)))
    if not out:
        raise SamplingError(f"all {tries} sampled points hit poles; retry with another seed")
    return out


def inverse(a: SquareMatrix) -> SquareMatrix:
    """Gauss-Jordan over the field of Scalars."""
    ctx = a.ctx
    n = a.dim
    one, zero = ctx.one(), ctx.zero()
    m = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(a.rows)]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        m[k], m[piv] = m[piv], m[k]
        p = m[k][k].invert()
        m[k] = [x * p if x else x for x in m[k]]
        for i in range(n):
            if i != k and m[i][k]:
                f = m[i][k]
                m[i] = [x - f * y if y else x for x, y in zip(m[i], m[k])]
    return SquareMatrix(ctx, [r[n:] for r in m])


# ----------------------------------------------------------------------- JSON

def matrix_to_json(a: SquareMatrix) -> dict:
    return {
        "dim": a.dim,
        "vars": list(a.ctx.variables),
        "entries": [[canonical_string(x) for x in r] for r in a.rows],
    }


def matrix_from_json(ctx: RingContext, doc) -> SquareMatrix:
    if isinstance(doc, str):
        doc = json.loads(doc)
    if list(doc["vars"]) != list(ctx.variables):
        raise ValueError("matrix variables do not match the context")
    m = SquareMatrix(ctx, [[parse_scalar(ctx, x) for x in r] for r in doc["entries"]])
    if m.dim != doc["dim"]:
        raise ValueError("declared dimension disagrees with the entries")
    return m
