"""Even dihedral type I2(2n): coupled sequences a_i, b_i and the two n-dimensional
Lawrence-Krammer type representations rho0 (E1 acts by 0) and rho1 (its mirror).

Basis of rho0: u_0..u_{n-1}, u_i corresponding to [...X0 X1]_i E0.
Row convention as in lk_odd.

Relation ids used in reports:
  E1   braid relation of length 2n
  E2   X_i - X_i^-1 = m_i (E_i - 1)
  E3   X_i E_i = E_i X_i = l_i E_i
  E4   E_i^2 = tau_i E_i
  E5   [X0 X1 ...]_{2n-1} E1 = E1 [X0 X1 ...]_{2n-1}
  E6   E0 W E1 = E1 W E0 = 0 for the alternating words W of length <= 2n
  E7   [X1 X0 ...]_{2n-1} E0 = E0 [X1 X0 ...]_{2n-1}
  E8   E0 [X1 X0 ...]_{4k+1} E0 = (m1/m0)(v0^-1 + l0^-1) E0     (4k+1 < n)
  E9   E0 [X1 X0 ...]_{4k+3} E0 = (v0^-1 + l0^-1) E0           (4k+3 < n)
  E10  E1 [X0 X1 ...]_{4k+1} E1 = (m0/m1)(v1^-1 + l1^-1) E1
  E11  E1 [X0 X1 ...]_{4k+3} E1 = (v1^-1 + l1^-1) E1
  E12  Delta E_i = l_i v_i^-1 E_i,  Delta = [X0 X1 ...]_{2n}
  INV  X_i X_i^-1 = X_i^-1 X_i = 1
  DS   Delta acts as the scalar l_w v_w^-1 on rho_w
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .lk_odd import (determinant_certificate, eval_word,
                     extract_projector_coefficients, invariance_defects,
                     projector_word)
from .matcore import (SquareMatrix, det_at_points, entrywise_conjugate,
                      evaluate_matrix, rational_det)
from .relations import (RelationInstance, RelationReport, check_in_matrices,
                        matrix_witness, word_eq, word_eq_scaled)
from .ringcore import (EVEN, PoleError, RingContext, Scalar, canonical_string,
                       conjugate, evaluate, lambda_even, m_even,
                       permute_variables, substitute, tau_even)
from .words import (E0, E1, X0, X0i, X1, X1i, Word, alternating,
                    alternating_ending, swap_nodes)

SWAP = {"v0": "v1", "v1": "v0", "l0": "l1", "l1": "l0"}


def swap_parameters(s: Scalar) -> Scalar:
    """The parameter swap l0 <-> l1, v0 <-> v1 (hence m0 <-> m1)."""
    return permute_variables(s, SWAP)


# ------------------------------------------------------------------ sequences

@dataclass
class FibSeqPair:
    a: list
    b: list
    a_primed: list
    b_primed: list


def _sequences(ctx: RingContext, K: int, b_rule: str = "corrected") -> tuple:
    """a_0..a_K, b_0..b_K.

    b_rule="corrected": b_{2i-1} = m0 a_{2i-2} + a_{2i-3}
    b_rule="literal":   b_{2i-1} = m0 a_{2i-1} + a_{2i-3}
    """
    m0, m1 = m_even(ctx, 0), m_even(ctx, 1)
    v0i = ctx.var("v0", -1)
    a = [ctx.one(), m1]
    b = [ctx.one(), m0]
    for j in range(2, K + 1):
        if j % 2 == 0:
            b.append(-v0i * a[j - 1])
            a.append(b[j])
        else:
            a.append(m1 * b[j - 1] + b[j - 2])
            if b_rule == "corrected":
                b.append(m0 * a[j - 1] + a[j - 2])
            elif b_rule == "literal":
                b.append(m0 * a[j] + a[j - 2])
            else:
                raise ValueError(f"unknown rule {b_rule!r}")
    return a[:K + 1], b[:K + 1]


def build_sequences(ctx: RingContext = EVEN, K: int = 8, b_rule: str = "corrected") -> FibSeqPair:
    if K < 1:
        raise ValueError("K must be at least 1")
    a, b = _sequences(ctx, K, b_rule)
    return FibSeqPair(a, b, [swap_parameters(x) for x in a], [swap_parameters(x) for x in b])


def sequence_identities_check(ctx: RingContext = EVEN, k_max: int = 6, seqs: FibSeqPair | None = None) -> RelationReport:
    """Sequence identities, each checked for k = 0..k_max (k >= 1 for the auxiliary ones)."""
    K = 4 * k_max + 4
    s = seqs or build_sequences(ctx, K)
    a = s.a
    if len(a) <= K:
        raise ValueError("sequences are too short for k_max")
    m0, m1 = m_even(ctx, 0), m_even(ctx, 1)
    v0, l0 = ctx.var("v0"), ctx.var("l0")
    base = ctx.var("l0", -1) + ctx.var("v0", -1)
    lam = lambda j: lambda_even(ctx, j)
    rep = RelationReport()
    for k in range(k_max + 1):
        lhs = base * a[2 * k + 1]
        rhs = sum((m0 * a[2 * k - 2 * i] * lam(2 * i + 1) for i in range(k + 1)), ctx.zero())
        rep.add("S1", (("k", k),), lhs == rhs, "(l0^-1 + v0^-1) a_{2k+1} = sum m0 a_{2k-2i} lambda_{2i+1}")
        lhs = sum((a[4 * k + 1 - 2 * i] * l0 * lam(2 * i - 1) for i in range(1, 2 * k + 1)), ctx.zero())
        lhs = lhs + (l0 + v0) / m0 * a[4 * k + 1]
        rep.add("S2", (("k", k),), lhs == m1 / m0 * (l0 + v0),
                "sum a_{4k+1-2i} l0 lambda_{2i-1} + (l0+v0)/m0 a_{4k+1} = (m1/m0)(l0+v0)")
        lhs = sum((a[4 * k + 3 - 2 * i] * l0 * lam(2 * i - 1) for i in range(1, 2 * k + 2)), ctx.zero())
        lhs = lhs + (l0 + v0) / m0 * a[4 * k + 3]
        rep.add("S3", (("k", k),), lhs == l0 + v0,
                "sum a_{4k+3-2i} l0 lambda_{2i-1} + (l0+v0)/m0 a_{4k+3} = l0+v0")
        if k >= 1:
            lhs = sum((a[2 * j - 1] * (m0 if j % 2 else m1) for j in range(1, 2 * k + 1)), ctx.zero())
            rep.add("S2'", (("k", k),), lhs == m1 * v0 - v0 * a[4 * k + 1],
                    "a1 m0 + a3 m1 + ... + a_{4k-1} m1 = m1 v0 - v0 a_{4k+1}")
        lhs = sum((a[2 * j - 1] * (m1 if j % 2 else m0) for j in range(1, 2 * k + 2)), ctx.zero())
        rep.add("S3'", (("k", k),), lhs == m0 * v0 - v0 * a[4 * k + 3],
                "a1 m1 + a3 m0 + ... + a_{4k+1} m1 = m0 v0 - v0 a_{4k+3}")
    return rep


# ------------------------------------------------------------- representation

@dataclass
class EvenRep:
    n: int
    which: int
    ctx: RingContext
    mats: dict
    tied: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.n

    def spec(self, s: Scalar) -> Scalar:
        """Push a generic scalar to the parameter locus this representation lives on."""
        return tie_v(s) if self.tied else s


def even_lk_matrices(ctx: RingContext, n: int) -> dict:
    """rho0: the six generator matrices on u_0..u_{n-1}."""
    seq = build_sequences(ctx, max(n, 2))
    a, b = seq.a, seq.b
    m0, m1 = m_even(ctx, 0), m_even(ctx, 1)
    l0 = ctx.var("l0")
    v0, v0i = ctx.var("v0"), ctx.var("v0", -1)
    lam = lambda j: lambda_even(ctx, j)
    one = ctx.one()
    last = n - 1
    x0, x1, x0i, x1i, e0 = ([dict() for _ in range(n)] for _ in range(5))
    for j in range(n):
        if j == 0:
            x0[0] = {0: l0}
            x1[0] = {1: one}
            x0i[0] = {0: l0.invert()}
            x1i[0] = {0: m1, 1: one}
            e0[0] = {0: tau_even(ctx, 0)}
            continue
        if j % 2 == 1:  # j = 2i-1
            e0[j] = {0: lam(j)}
            x1[j] = {j - 1: one, j: -m1}
            x1i[j] = {j - 1: one}
            if j < last:
                x0[j] = {j + 1: one}
                x0i[j] = {0: -m0 * lam(j), j: m0, j + 1: one}
        else:  # j = 2i
            e0[j] = {0: l0 * lam(j - 1)}
            x0[j] = {0: m0 * l0 * lam(j - 1), j - 1: one, j: -m0}
            x0i[j] = {j - 1: one}
            if j < last:
                x1[j] = {j + 1: one}
                x1i[j] = {j: m1, j + 1: one}
    if n % 2 == 0:
        x0[last] = {i: v0i * a[last - i] for i in range(n)}
        r = {0: v0i * a[last] - m0 * lam(last)}
        for i in range(1, n - 1):
            r[i] = v0i * a[last - i]
        r[last] = v0
        x0i[last] = r
    else:
        x1[last] = {i: v0i * b[last - i] for i in range(n)}
        r = {i: v0i * b[last - i] for i in range(n)}
        r[last] = r[last] + m1
        x1i[last] = r
        x0i[last] = {last - 1: one}
    build = lambda rows: SquareMatrix.from_sparse_rows(ctx, n, rows)
    zero = SquareMatrix.zeros(ctx, n)
    return {X0: build(x0), X1: build(x1), X0i: build(x0i), X1i: build(x1i), E0: build(e0), E1: zero}


def tie_v(s: Scalar) -> Scalar:
    """Restrict to the locus v1 = v0."""
    ctx = s.ctx
    return substitute(s, ctx, {"v0": ctx.var("v0"), "l0": ctx.var("l0"), "v1": ctx.var("v0"), "l1": ctx.var("l1")})


def build_even_rep(n: int, which: int = 0, ctx: RingContext = EVEN, tied: bool = False) -> EvenRep:
    """tied=True restricts to v1 = v0.  For odd n the matrices only satisfy the
    quadratic relation of the second generator on that locus."""
    if n < 2:
        raise ValueError("the even case needs n >= 2")
    if which not in (0, 1):
        raise ValueError("which must be 0 or 1")
    mats = even_lk_matrices(ctx, n)
    if which == 1:
        mats = {t.swapped(): M.map(swap_parameters) for t, M in mats.items()}
    if tied:
        mats = {t: M.map(tie_v) for t, M in mats.items()}
    return EvenRep(n, which, ctx, mats, tied)


def _spec_instances(rep: EvenRep, insts: list) -> list:
    if not rep.tied:
        return insts
    return [i.map_terms(rep.spec, lambda w: w) for i in insts]


def delta_word(n: int) -> Word:
    return alternating(X0, X1, 2 * n)


def even_relation_instances(n: int, ctx: RingContext = EVEN, extended: bool = False) -> list:
    """Relation instances; with extended=True only the E8-E11 instances with
    n <= 4k+1 (resp. 4k+3) <= 2n-1 are returned (the alternative range reading)."""
    m0, m1 = m_even(ctx, 0), m_even(ctx, 1)
    v = [ctx.var("v0"), ctx.var("v1")]
    l = [ctx.var("l0"), ctx.var("l1")]
    mm = [m0, m1]
    one = ctx.one()
    N = 2 * n
    out = []
    lam0 = v[0].invert() + l[0].invert()
    lam1 = v[1].invert() + l[1].invert()

    def in_range(L: int) -> bool:
        return (n <= L <= N - 1) if extended else L < n

    for k in range(n):
        if in_range(4 * k + 1):
            L = 4 * k + 1
            out.append(word_eq_scaled("E8", (("k", k),), (E0,) + alternating(X1, X0, L) + (E0,), m1 / m0 * lam0, (E0,)))
            out.append(word_eq_scaled("E10", (("k", k),), (E1,) + alternating(X0, X1, L) + (E1,), m0 / m1 * lam1, (E1,)))
        if in_range(4 * k + 3):
            L = 4 * k + 3
            out.append(word_eq_scaled("E9", (("k", k),), (E0,) + alternating(X1, X0, L) + (E0,), lam0, (E0,)))
            out.append(word_eq_scaled("E11", (("k", k),), (E1,) + alternating(X0, X1, L) + (E1,), lam1, (E1,)))
    if extended:
        return out
    core = [word_eq("E1", (), alternating(X0, X1, N), alternating(X1, X0, N), ctx)]
    for i, (x, xi, e) in enumerate(((X0, X0i, E0), (X1, X1i, E1))):
        core.append(RelationInstance("E2", (("i", i),), ((one, (x,)), (-one, (xi,))),
                                     ((mm[i], (e,)), (-mm[i], ()))))
        core.append(word_eq_scaled("E3", (("i", i), ("side", "left")), (x, e), l[i], (e,)))
        core.append(word_eq_scaled("E3", (("i", i), ("side", "right")), (e, x), l[i], (e,)))
        core.append(word_eq_scaled("E4", (("i", i),), (e, e), tau_even(ctx, i), (e,)))
    core.append(word_eq("E5", (), alternating(X0, X1, N - 1) + (E1,), (E1,) + alternating(X0, X1, N - 1), ctx))
    for W in relation6_family(n):
        core.append(RelationInstance("E6", (("W", " ".join(t.value for t in W) or "1"), ("order", "E0 W E1")),
                                     ((one, (E0,) + W + (E1,)),), ()))
        core.append(RelationInstance("E6", (("W", " ".join(t.value for t in W) or "1"), ("order", "E1 W E0")),
                                     ((one, (E1,) + W + (E0,)),), ()))
    core.append(word_eq("E7", (), alternating(X1, X0, N - 1) + (E0,), (E0,) + alternating(X1, X0, N - 1), ctx))
    for i, e in enumerate((E0, E1)):
        core.append(word_eq_scaled("E12", (("i", i),), delta_word(n) + (e,), l[i] * v[i].invert(), (e,)))
    for i, (x, xi) in enumerate(((X0, X0i), (X1, X1i))):
        core.append(word_eq("INV", (("i", i), ("order", "x.xinv")), (x, xi), (), ctx))
        core.append(word_eq("INV", (("i", i), ("order", "xinv.x")), (xi, x), (), ctx))
    return core + out


def relation6_family(n: int) -> list:
    """All alternating positive words of length <= 2n (this covers the positive part of the basis)."""
    seen = []
    for L in range(2 * n + 1):
        for w in (alternating(X0, X1, L), alternating(X1, X0, L)):
            if w not in seen:
                seen.append(w)
    return seen


def _tag(report: RelationReport, which: int) -> RelationReport:
    for r in report.records:
        r.index = r.index + (("rep", which),)
    return report


def verify_relations_even(rep: EvenRep, partner: EvenRep) -> RelationReport:
    if rep.n != partner.n or {rep.which, partner.which} != {0, 1} or rep.tied != partner.tied:
        raise ValueError("rep and partner must be the two components for the same n")
    out = RelationReport()
    insts = even_relation_instances(rep.n, rep.ctx)
    for r in sorted((rep, partner), key=lambda x: x.which):
        out.extend(_tag(check_in_matrices(_spec_instances(r, insts), lambda w, r=r: eval_word(r, w), r.ctx, r.dim),
                        r.which))
        w = r.which
        c = r.spec(r.ctx.var(f"l{w}") * r.ctx.var(f"v{w}", -1))
        D = eval_word(r, delta_word(r.n))
        target = SquareMatrix.identity(r.ctx, r.dim) * c
        out.add("DS", (("rep", w),), D == target, f"Delta = l{w} v{w}^-1 I",
                None if D == target else matrix_witness(D - target))
    return out


def range_reading_report(rep: EvenRep) -> RelationReport:
    """E8-E11 under the wider reading n <= 4k+1, 4k+3 <= 2n-1 (informational)."""
    insts = _spec_instances(rep, even_relation_instances(rep.n, rep.ctx, extended=True))
    return _tag(check_in_matrices(insts, lambda w: eval_word(rep, w), rep.ctx, rep.dim), rep.which)


def delta_cycle_check(rep: EvenRep) -> RelationReport:
    """(X0 X1)^i u_0 = u_{2i} for i < n/2 and (X0 X1)^n u_0 = l0 v0^-1 u_0 (n even, rho0)."""
    out = RelationReport()
    n = rep.n
    if rep.which != 0 or n % 2:
        return out
    one, zero = rep.ctx.one(), rep.ctx.zero()
    for i in range(n // 2):
        row = eval_word(rep, alternating(X0, X1, 2 * i)).rows[0]
        want = tuple(one if j == 2 * i else zero for j in range(n))
        out.add("CYC", (("i", i),), row == want, f"(X0 X1)^{i} u0 = u{2 * i}")
    row = eval_word(rep, alternating(X0, X1, 2 * n)).rows[0]
    c = rep.spec(rep.ctx.var("l0") * rep.ctx.var("v0", -1))
    want = tuple(c if j == 0 else zero for j in range(n))
    out.add("CYC", (("i", n),), row == want, "(X0 X1)^n u0 = l0 v0^-1 u0")
    return out


def inverse_expansion_check(rep: EvenRep, k_max: int = 6) -> RelationReport:
    """[...X0^-1 X1^-1]_{2k} E0 = sum_i b_{2k-i} [...X0 X1]_i E0 and
    [...X0^-1 X1^-1]_{2k+1} E0 = sum_i a_{2k+1-i} [...X0 X1]_i E0, for k <= k_max.

    Records are tagged window=inside for lengths <= 2n-1, where the expansion holds
    in rho0, and window=beyond otherwise (there it is reported but expected to fail)."""
    if rep.which != 0:
        raise ValueError("the expansions are stated for rho0")
    ctx = rep.ctx
    seq = build_sequences(ctx, 2 * k_max + 2)
    out = RelationReport()
    for j in range(2 * k_max + 2):
        coeffs = seq.b if j % 2 == 0 else seq.a
        lhs_w = alternating_ending(X0i, X1i, j) + (E0,)
        window = "inside" if j <= 2 * rep.n - 1 else "beyond"
        inst = RelationInstance("NEG", (("length", j), ("window", window)), ((ctx.one(), lhs_w),),
                                tuple((rep.spec(coeffs[j - i]), alternating_ending(X0, X1, i) + (E0,)) for i in range(j + 1)))
        out.extend(check_in_matrices([inst], lambda w: eval_word(rep, w), ctx, rep.dim))
    return out


def psi_automorphism_check(n: int, ctx: RingContext = EVEN, tied: bool = False) -> RelationReport:
    """E0 [X1^-1 X0^-1 ...]_{4k+1} E0 = (m1/m0)(v0 + l0) E0 and the 4k+3 analogue on rho0,
    plus the node-swapped statements on rho1."""
    out = RelationReport()
    reps = [build_even_rep(n, 0, ctx, tied), build_even_rep(n, 1, ctx, tied)]
    m = [m_even(ctx, 0), m_even(ctx, 1)]
    for w, rep in enumerate(reps):
        o = 1 - w
        v, l = ctx.var(f"v{w}"), ctx.var(f"l{w}")
        e = E0 if w == 0 else E1
        xa, xb = (X1i, X0i) if w == 0 else (X0i, X1i)
        insts = []
        for k in range(n):
            if 4 * k + 1 < n:
                insts.append(word_eq_scaled("PSI8", (("k", k),), (e,) + alternating(xa, xb, 4 * k + 1) + (e,),
                                            m[o] / m[w] * (v + l), (e,)))
            if 4 * k + 3 < n:
                insts.append(word_eq_scaled("PSI9", (("k", k),), (e,) + alternating(xa, xb, 4 * k + 3) + (e,),
                                            v + l, (e,)))
        out.extend(_tag(check_in_matrices(_spec_instances(rep, insts), lambda x, r=rep: eval_word(r, x), ctx, n), w))
    return out


# ----------------------------------------------------------------- projectors

def mirrored_projector_word(k: int) -> Word:
    return swap_nodes(projector_word(k))


def aij_from_rep(rep: EvenRep) -> SquareMatrix:
    words = projector_word if rep.which == 0 else mirrored_projector_word
    return extract_projector_coefficients(rep, words)


def aij_closed(n: int, ctx: RingContext = EVEN) -> SquareMatrix:
    lam = lambda j: lambda_even(ctx, j)
    m0, m1 = m_even(ctx, 0), m_even(ctx, 1)
    l0 = ctx.var("l0")
    memo = {}

    def upper(i: int, j: int) -> Scalar:
        # i < j with j - i odd
        key = (i, j)
        if key in memo:
            return memo[key]
        if i == 0:
            val = lam(j)
        elif i % 2 == 1:
            # a_{2p+1,2k} = a_{2p,2k+1} + m1 l0 lambda_{2k-2p-1}
            val = upper(i - 1, j + 1) + m1 * l0 * lam(j - i)
        else:
            # a_{2p,2k+1} = a_{2p-1,2k+2} - m0 lambda_{2k+1} conj(lambda_{2p-1}) + m0 l0 lambda_{2k-2p+1}
            val = upper(i - 1, j + 1) - m0 * lam(j) * conjugate(ctx, lam(i - 1)) + m0 * l0 * lam(j - i)
        memo[key] = val
        return val

    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = tau_even(ctx, 0)
        for j in range(i + 1, n):
            rows[i][j] = l0 * lam(j - i - 1) if (j - i) % 2 == 0 else upper(i, j)
    for i in range(n):
        for j in range(i):
            rows[i][j] = conjugate(ctx, rows[j][i])
    return SquareMatrix(ctx, rows)


def gram_even(n: int, which: int = 0, ctx: RingContext = EVEN) -> SquareMatrix:
    """(u_i, u_j) = a_{j,i}"""
    A = aij_closed(n, ctx)
    G = SquareMatrix(ctx, [[A.rows[j][i] for j in range(n)] for i in range(n)])
    if which == 1:
        G = G.map(swap_parameters)
    return G


def check_invariance_even(rep: EvenRep, G: SquareMatrix) -> bool:
    if G.dim != rep.dim:
        raise ValueError("Gram matrix has the wrong size")
    G = G.map(rep.spec)
    return all(d.is_zero() for d in invariance_defects(rep, G).values())


LIMIT_VALUES = (Fraction(3), Fraction(3, 2), Fraction(6), Fraction(3, 4))


def epsilon_point(eps: Fraction) -> dict:
    return {"l0": Fraction(2), "l1": Fraction(2), "v0": 1 + eps, "v1": 1 + eps}


def limit_pattern(A: SquareMatrix, eps: Fraction = Fraction(1, 1000)) -> dict:
    """Entries of the projector-coefficient matrix at l0 = l1 = 2, v0 = v1 = 1 + eps."""
    vals = evaluate_matrix(A, epsilon_point(eps))
    n = A.dim
    off = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                off[f"{i},{j}"] = vals[i][j]
    diag = [vals[i][i] for i in range(n)]
    near = {k: min(abs(x - t) for t in LIMIT_VALUES) <= Fraction(1, 10) for k, x in off.items()}
    return {
        "eps": str(eps),
        "offdiag": {k: str(v) for k, v in off.items()},
        "offdiag_near_limit_set": all(near.values()),
        "diag": [str(x) for x in diag],
        "diag_exceeds_1000": all(x > 1000 for x in diag),
    }


def irreducibility_certificate_even(rep: EvenRep, seed: int) -> dict:
    A = aij_from_rep(rep)
    out = {"dim": A.dim, "epsilon_points": []}
    certified = False
    for eps in (Fraction(1, 10), Fraction(1, 100)):
        d = rational_det(evaluate_matrix(A, epsilon_point(eps)))
        out["epsilon_points"].append({"eps": str(eps), "det": str(d)})
        certified = certified or d != 0
    seeded = det_at_points(A, seed)
    out["seeded_points"] = [{"point": {v: str(x) for v, x in p.items()}, "det": str(val)} for p, val in seeded]
    certified = certified or any(val != 0 for _, val in seeded)
    out["certified"] = certified
    out["limit_pattern"] = limit_pattern(A)
    return out
