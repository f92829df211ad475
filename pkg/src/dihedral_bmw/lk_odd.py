"""The (2n+1)-dimensional Lawrence-Krammer type representation for I2(2n+1).

Basis v_0..v_{2n}, where v_i corresponds to [...X0 X1]_i E0 in the algebra.
Matrices use the row convention: row i of mats[A] holds the coefficients of A.v_i.

Relation ids used in reports:
  R1  braid relation of length 2n+1
  R2  X_i - X_i^-1 = m (E_i - 1)
  R3  X_i E_i = E_i X_i = l E_i
  R4  E_i^2 = tau E_i
  R5  E0 [X1 X0 ...]_{2i-1} E0 = l^-1 E0            (1 <= i <= n)
  R6  E1 [X0 X1 ...]_{2i-1} E1 = l^-1 E1
  R7  E0 [X1^-1 X0^-1 ...]_{2i-1} E0 = l E0
  R8  E1 [X0^-1 X1^-1 ...]_{2i-1} E1 = l E1
  R9  [X0 X1 ...]_{2n} E0 = E1 [X0 X1 ...]_{2n}
  R10 E0 [X1 X0 ...]_{2n} = [X1 X0 ...]_{2n} E1
  T1  E0 E1 = [X1 X0 ...]_{2n} E1 = [X1^-1 X0^-1 ...]_{2n} E1 = E0 [X1 X0 ...]_{2n} = E0 [X1^-1 X0^-1 ...]_{2n}
  T2  the same with the nodes exchanged
  T3  E0 E1 E0 = E0, E1 E0 E1 = E1
  INV X_i X_i^-1 = X_i^-1 X_i = 1
  D0  both braid words equal the closed-form Delta0 matrix
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .matcore import (CapExceeded, SquareMatrix, det_at_points, det_exact,
                      entrywise_conjugate, evaluate_matrix, mat_mul,
                      rational_rank, sample_point, size_caps, transpose)
from .relations import (RelationInstance, RelationReport, check_in_matrices,
                        matrix_witness, word_eq, word_eq_scaled)
from .ringcore import (ODD, PoleError, RingContext, Scalar, canonical_string,
                       substitute, tau_odd)
from .words import (E0, E1, X0, X0i, X1, X1i, GenToken, Word, alternating,
                    alternating_ending)

BRAUER = RingContext("Brauer", ("tau",), ("id",), (False,))


@dataclass
class OddRep:
    n: int
    ctx: RingContext
    mats: dict
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return 2 * self.n + 1


def _acc(row: dict, j: int, value) -> None:
    row[j] = row[j] + value if j in row else value


def odd_lk_matrices(ctx: RingContext, n: int, m, l, tau) -> dict:
    """All six generator matrices with the parameters m, l, tau supplied by the caller."""
    m, l, tau = ctx(m), ctx(l), ctx(tau)
    li = l.invert()
    one = ctx.one()
    N = 2 * n
    dim = N + 1
    x0, x1, x0i, x1i, e0, e1 = ([dict() for _ in range(dim)] for _ in range(6))

    x0[0] = {0: l}
    for k in range(1, n + 1):
        _acc(x0[2 * k], 0, m)
        _acc(x0[2 * k], 2 * k, -m)
        _acc(x0[2 * k], 2 * k - 1, one)
    for k in range(n):
        x0[2 * k + 1] = {2 * k + 2: one}

    x1[0] = {1: one}
    x1[N] = {N: l}
    for k in range(1, n):
        x1[2 * k] = {2 * k + 1: one}
    for k in range(n):
        r = x1[2 * k + 1]
        _acc(r, 2 * k, one)
        _acc(r, 2 * k + 1, -m)
        _acc(r, N, m * l)

    x0i[0] = {0: li}
    for k in range(1, n + 1):
        x0i[2 * k] = {2 * k - 1: one}
    for k in range(n):
        r = x0i[2 * k + 1]
        _acc(r, 0, -m * li)
        _acc(r, 2 * k + 1, m)
        _acc(r, 2 * k + 2, one)

    r = x1i[0]
    _acc(r, 0, m)
    _acc(r, 1, one)
    _acc(r, N, -m)
    x1i[N] = {N: li}
    for k in range(1, n):
        r = x1i[2 * k]
        _acc(r, 2 * k, m)
        _acc(r, 2 * k + 1, one)
        _acc(r, N, -m)
    for k in range(n):
        x1i[2 * k + 1] = {2 * k: one}

    e0[0] = {0: tau}
    for k in range(1, n + 1):
        e0[2 * k] = {0: one}
    for k in range(n):
        e0[2 * k + 1] = {0: li}

    e1[0] = {N: one}
    e1[N] = {N: tau}
    for k in range(1, n):
        e1[2 * k] = {N: one}
    for k in range(n):
        e1[2 * k + 1] = {N: l}

    build = lambda rows: SquareMatrix.from_sparse_rows(ctx, dim, rows)
    return {X0: build(x0), X1: build(x1), X0i: build(x0i), X1i: build(x1i), E0: build(e0), E1: build(e1)}


def build_odd_rep(n: int, ctx: RingContext = ODD) -> OddRep:
    if n < 1:
        raise ValueError("n must be at least 1")
    mats = odd_lk_matrices(ctx, n, ctx.var("m"), ctx.var("l"), tau_odd(ctx))
    return OddRep(n, ctx, mats)


def eval_word(rep, w: Word) -> SquareMatrix:
    """Matrix of the operator w (row convention, so factors multiply right to left)."""
    w = tuple(w)
    cache = rep._cache
    if w in cache:
        return cache[w]
    if not w:
        out = SquareMatrix.identity(rep.ctx, rep.dim)
    elif len(w) == 1:
        out = rep.mats[w[0]]
    else:
        out = mat_mul(rep.mats[w[-1]], eval_word(rep, w[:-1]))
    cache[w] = out
    return out


def delta0_matrix(n: int, ctx: RingContext = ODD) -> SquareMatrix:
    m, l = ctx.var("m"), ctx.var("l")
    ml = m * l
    N = 2 * n
    rows = [dict() for _ in range(N + 1)]
    rows[0] = {N: l}
    for k in range(n):
        r = rows[2 * k + 1]
        K = k if 2 * k + 1 <= n else n - k - 1
        for i in range(K + 1):
            _acc(r, 2 * i, ml)
            _acc(r, N - 2 * i, -ml)
        _acc(r, N - 2 * k - 1, l)
    for k in range(1, n + 1):
        r = rows[2 * k]
        K = k - 1 if 2 * k <= n else n - k - 1
        for i in range(K + 1):
            _acc(r, 2 * i + 1, ml)
            _acc(r, N - 2 * i - 1, -ml)
        _acc(r, N - 2 * k, l)
    return SquareMatrix.from_sparse_rows(ctx, N + 1, rows)


# ------------------------------------------------------------------ relations

def odd_relation_instances(n: int, ctx: RingContext = ODD) -> list:
    m, l = ctx.var("m"), ctx.var("l")
    li = l.invert()
    tau = tau_odd(ctx)
    one = ctx.one()
    N = 2 * n
    out = []
    out.append(word_eq("R1", (), alternating(X0, X1, N + 1), alternating(X1, X0, N + 1), ctx))
    for i, (x, xi, e) in enumerate(((X0, X0i, E0), (X1, X1i, E1))):
        out.append(RelationInstance("R2", (("i", i),), ((one, (x,)), (-one, (xi,))),
                                    ((m, (e,)), (-m, ()))))
        out.append(word_eq_scaled("R3", (("i", i), ("side", "left")), (x, e), l, (e,)))
        out.append(word_eq_scaled("R3", (("i", i), ("side", "right")), (e, x), l, (e,)))
        out.append(word_eq_scaled("R4", (("i", i),), (e, e), tau, (e,)))
    for i in range(1, n + 1):
        L = 2 * i - 1
        out.append(word_eq_scaled("R5", (("i", i),), (E0,) + alternating(X1, X0, L) + (E0,), li, (E0,)))
        out.append(word_eq_scaled("R6", (("i", i),), (E1,) + alternating(X0, X1, L) + (E1,), li, (E1,)))
        out.append(word_eq_scaled("R7", (("i", i),), (E0,) + alternating(X1i, X0i, L) + (E0,), l, (E0,)))
        out.append(word_eq_scaled("R8", (("i", i),), (E1,) + alternating(X0i, X1i, L) + (E1,), l, (E1,)))
    out.append(word_eq("R9", (), alternating(X0, X1, N) + (E0,), (E1,) + alternating(X0, X1, N), ctx))
    out.append(word_eq("R10", (), (E0,) + alternating(X1, X0, N), alternating(X1, X0, N) + (E1,), ctx))
    for rid, (a, b, ea, eb, ai, bi) in (("T1", (X0, X1, E0, E1, X0i, X1i)), ("T2", (X1, X0, E1, E0, X1i, X0i))):
        base = (ea, eb)
        forms = [alternating(b, a, N) + (eb,), alternating(bi, ai, N) + (eb,),
                 (ea,) + alternating(b, a, N), (ea,) + alternating(bi, ai, N)]
        for k, f in enumerate(forms, start=1):
            out.append(word_eq(rid, (("form", k),), base, f, ctx))
    out.append(word_eq("T3", (("i", 0),), (E0, E1, E0), (E0,), ctx))
    out.append(word_eq("T3", (("i", 1),), (E1, E0, E1), (E1,), ctx))
    for i, (x, xi) in enumerate(((X0, X0i), (X1, X1i))):
        out.append(word_eq("INV", (("i", i), ("order", "x.xinv")), (x, xi), (), ctx))
        out.append(word_eq("INV", (("i", i), ("order", "xinv.x")), (xi, x), (), ctx))
    return out


def verify_relations_odd(rep: OddRep) -> RelationReport:
    report = check_in_matrices(odd_relation_instances(rep.n, rep.ctx), lambda w: eval_word(rep, w),
                               rep.ctx, rep.dim)
    if rep.ctx == ODD:
        d0 = delta0_matrix(rep.n, rep.ctx)
        for name, first, second in (("Delta1", X0, X1), ("Delta2", X1, X0)):
            w = alternating(first, second, 2 * rep.n + 1)
            got = eval_word(rep, w)
            wit = None if got == d0 else matrix_witness(got - d0)
            report.add("D0", (("word", name),), got == d0, f"[{first.value} {second.value} ...]_{2 * rep.n + 1} = Delta0",
                       wit)
    return report


# ----------------------------------------------------------------- projectors

def projector_word(k: int) -> Word:
    """p_k = [...X0 X1]_k E0 [X1^-1 X0^-1 ...]_k"""
    return alternating_ending(X0, X1, k) + (E0,) + alternating(X1i, X0i, k)


def extract_projector_coefficients(rep, words_for) -> SquareMatrix:
    """Row k holds the coefficients c_{k,d} with p_k(v_d) = c_{k,d} v_k."""
    ctx = rep.ctx
    rows = []
    for k in range(rep.dim):
        M = eval_word(rep, words_for(k))
        row = []
        for d in range(rep.dim):
            for j in range(rep.dim):
                if j != k and M.rows[d][j]:
                    raise AssertionError(f"p_{k} does not map v_{d} onto the line of v_{k}")
            row.append(M.rows[d][k])
        rows.append(row)
    return SquareMatrix(ctx, rows)


def projector_alpha(rep: OddRep) -> SquareMatrix:
    return extract_projector_coefficients(rep, projector_word)


def alpha_closed_form(n: int, ctx: RingContext = ODD) -> SquareMatrix:
    l = ctx.var("l")
    li = l.invert()
    tau = tau_odd(ctx)
    one = ctx.one()
    dim = 2 * n + 1
    rows = []
    for i in range(dim):
        row = []
        for j in range(dim):
            if i == j:
                row.append(tau)
            elif (i - j) % 2 == 0:
                row.append(one)
            elif i > j:
                row.append(l)
            else:
                row.append(li)
        rows.append(row)
    return SquareMatrix(ctx, rows)


def gram_odd(n: int, ctx: RingContext = ODD) -> SquareMatrix:
    return entrywise_conjugate(alpha_closed_form(n, ctx))


def invariance_defects(rep, G: SquareMatrix) -> dict:
    """For X0, X1: M G conj(M)^T - G (zero matrix means invariant)."""
    out = {}
    for t in (X0, X1):
        M = rep.mats[t]
        lhs = mat_mul(mat_mul(M, G), transpose(entrywise_conjugate(M)))
        out[t] = lhs - G
    return out


def check_invariance_odd(rep: OddRep, G: SquareMatrix) -> bool:
    if G.dim != rep.dim:
        raise ValueError("Gram matrix has the wrong size")
    return all(d.is_zero() for d in invariance_defects(rep, G).values())


def invariant_form_dimension(rep, seed: int) -> tuple:
    """Dimension of {G : M G conj(M)^T = G for X0, X1} at one seeded rational point."""
    import random
    rng = random.Random(seed)
    ctx = rep.ctx
    N = rep.dim
    for _ in range(100):
        point = sample_point(ctx, rng)
        try:
            mats = [(evaluate_matrix(rep.mats[t], point),
                     evaluate_matrix(entrywise_conjugate(rep.mats[t]), point)) for t in (X0, X1)]
        except PoleError:
            continue
        break
    else:
        raise RuntimeError("could not find a pole-free point")
    eqs = []
    for M, C in mats:
        for i in range(N):
            for j in range(N):
                row = [Fraction(0)] * (N * N)
                for k in range(N):
                    if M[i][k] == 0:
                        continue
                    for l in range(N):
                        if C[j][l]:
                            row[k * N + l] += M[i][k] * C[j][l]
                row[i * N + j] -= 1
                eqs.append(row)
    return N * N - rational_rank(eqs), point


def irreducibility_certificate_odd(rep: OddRep, seed: int, matrix: SquareMatrix | None = None) -> dict:
    A = projector_alpha(rep) if matrix is None else matrix
    return determinant_certificate(A, seed)


def determinant_certificate(A: SquareMatrix, seed: int, min_points: int = 3, k: int = 5) -> dict:
    cap = size_caps()["det"]
    if A.dim <= cap:
        try:
            d = det_exact(A, cap)
            return {"method": "symbolic", "dim": A.dim, "det": canonical_string(d), "certified": bool(d)}
        except CapExceeded:
            pass
    values = det_at_points(A, seed, k=k)
    pts = [{"point": {v: str(x) for v, x in p.items()}, "det": str(val)} for p, val in values]
    nonzero = sum(1 for _, val in values if val != 0)
    return {"method": "points", "dim": A.dim, "points": pts,
            "certified": nonzero > 0 and len(values) >= min_points}


# --------------------------------------------------------------- degeneration

def degenerate_rep(n: int) -> OddRep:
    """m -> 0, l -> 1 with tau kept as an independent parameter."""
    return OddRep(n, BRAUER, odd_lk_matrices(BRAUER, n, 0, 1, BRAUER.var("tau")))


def brauer_odd_relation_instances(n: int, ctx: RingContext = BRAUER, mu=1) -> list:
    """Dihedral Brauer relations for I2(2n+1), generators S_i written as X_i."""
    mu = ctx(mu)
    tau = ctx.var("tau")
    N = 2 * n
    out = [word_eq("B1", (), alternating(X0, X1, N + 1), alternating(X1, X0, N + 1), ctx)]
    for i, (s, e) in enumerate(((X0, E0), (X1, E1))):
        out.append(word_eq("B2", (("i", i),), (s, s), (), ctx))
        out.append(word_eq("B3", (("i", i), ("side", "left")), (s, e), (e,), ctx))
        out.append(word_eq("B3", (("i", i), ("side", "right")), (e, s), (e,), ctx))
        out.append(word_eq_scaled("B4", (("i", i),), (e, e), tau, (e,)))
    for i in range(1, n + 1):
        L = 2 * i - 1
        out.append(word_eq_scaled("B5", (("i", i),), (E0,) + alternating(X1, X0, L) + (E0,), mu, (E0,)))
        out.append(word_eq_scaled("B6", (("i", i),), (E1,) + alternating(X0, X1, L) + (E1,), mu, (E1,)))
    out.append(word_eq("B7", (), alternating(X0, X1, N) + (E0,), (E1,) + alternating(X0, X1, N), ctx))
    out.append(word_eq("B8", (), alternating(X1, X0, N) + (E1,), (E0,) + alternating(X1, X0, N), ctx))
    return out


def degeneration_check(n: int) -> RelationReport:
    """Specialize l -> 1, m -> 0 and check the dihedral Brauer relations with mu = 1."""
    rep = build_odd_rep(n)
    deg = degenerate_rep(n)
    report = RelationReport()
    point = {"m": BRAUER.zero(), "l": BRAUER.one()}
    for t in (X0, X1):
        spec = rep.mats[t].map(lambda x: substitute(x, BRAUER, point), BRAUER)
        same = spec == deg.mats[t]
        report.add("SUB", (("token", t.value),), same, f"{t.value} at m=0, l=1 matches the degenerate builder")
        sq = mat_mul(spec, spec)
        ok = sq == SquareMatrix.identity(BRAUER, rep.dim)
        report.add("INVOL", (("token", t.value),), ok, f"{t.value}^2 = 1 at m=0, l=1")
    report.extend(check_in_matrices(brauer_odd_relation_instances(n), lambda w: eval_word(deg, w),
                                    BRAUER, deg.dim))
    return report
