"""The dihedral algebras as explicit finite-dimensional algebras over the spanning set.

Elements are sparse combinations {SigmaIndex: Scalar}.  Multiplication is built from
the left action of single letters on basis elements:

  * on the ideal part C_{i,k} = w_i E w_k^re the letters act through the first index
    by the rows of the LK matrices (and through the second index, from the right,
    by the same rows, as the reversal anti-automorphism demands);
  * on positive alternating words a letter either extends the word or, when the word
    already starts with it, is removed with X^2 = 1 + m l E - m X;
  * E_a times a positive word P is C_{0,0} P (the E1 of the odd case is C_{2n,2n});
  * X^-1 = X - m E + m.

Nothing here assumes the result is well defined: associativity, the unit law, the
defining relations and compatibility with the LK representations are checked
separately and reported.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .lk_even import build_even_rep, even_relation_instances, relation6_family, tie_v
from .lk_odd import build_odd_rep, eval_word, odd_relation_instances
from .matcore import CapExceeded, rational_rank, rational_solve, size_caps
from .relations import RelationInstance, RelationReport
from .ringcore import (EVEN, ODD, PoleError, RingContext, Scalar, _to_sympy,
                       canonical_string, conjugate, evaluate, parse_scalar,
                       scalar_sum)
from .words import (E0, E1, X0, X0i, X1, X1i, GenToken, SigmaIndex, Word,
                    _norm_case, format_word, ideal_word, parse_word,
                    positive_word, reverse, sigma_enumerate)

Combination = dict  # SigmaIndex -> Scalar, no zero values

_X = {0: X0, 1: X1}
_XI = {0: X0i, 1: X1i}
_E = {0: E0, 1: E1}


def collect(pairs, ctx: RingContext) -> Combination:
    """Sum (index, scalar) pairs into a combination without zero entries."""
    buckets: dict = {}
    for idx, c in pairs:
        if c:
            buckets.setdefault(idx, []).append(c)
    out = {}
    for idx, cs in buckets.items():
        s = cs[0] if len(cs) == 1 else scalar_sum(cs, ctx)
        if s:
            out[idx] = s
    return out


def comb_equal(a: Combination, b: Combination) -> bool:
    return a.keys() == b.keys() and all(a[k] == b[k] for k in a)


def comb_sub(a: Combination, b: Combination, ctx: RingContext) -> Combination:
    return collect(list(a.items()) + [(k, -v) for k, v in b.items()], ctx)


def comb_scale(a: Combination, c: Scalar) -> Combination:
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def comb_to_json(a: Combination, order: dict) -> list:
    return [[k.label(), canonical_string(v)] for k, v in sorted(a.items(), key=lambda kv: order[kv[0]])]


class DihedralAlgebra:
    """B for I2(2n+1) (case Odd) or I2(2n) (case Even) on its spanning set."""

    def __init__(self, case_tag: str, n: int, tied: bool = False):
        self.case = _norm_case(case_tag)
        self.n = n
        self.tied = tied
        if self.case == "Odd":
            if tied:
                raise ValueError("tied parameters only apply to the even case")
            self.ctx = ODD
            self.layers = {0: build_odd_rep(n)}
            self.top = 2 * n          # ideal indices run over 0..top
            self.maxlen = 2 * n + 1   # longest positive word
            self.m = {0: ODD.var("m"), 1: ODD.var("m")}
            self.l = {0: ODD.var("l"), 1: ODD.var("l")}
        else:
            self.ctx = EVEN
            self.layers = {0: build_even_rep(n, 0, EVEN, tied), 1: build_even_rep(n, 1, EVEN, tied)}
            self.top = n - 1
            self.maxlen = 2 * n
            spec = tie_v if tied else (lambda s: s)
            self.m = {i: spec(EVEN.var(f"v{i}") - EVEN.var(f"v{i}", -1)) for i in (0, 1)}
            self.l = {i: EVEN.var(f"l{i}") for i in (0, 1)}
        self.spec = tie_v if tied else (lambda s: s)
        self.entries = sigma_enumerate(self.case, n)
        self.basis = [idx for idx, _ in self.entries]
        self.words = {idx: w for idx, w in self.entries}
        self.order = {idx: k for k, idx in enumerate(self.basis)}
        self.unit = self.pos(0, 0)
        self._left: dict = {}
        self._prod: dict = {}

    # ------------------------------------------------------------ indexing
    @property
    def dim(self) -> int:
        return len(self.basis)

    def pos(self, start: int, length: int) -> SigmaIndex:
        if length == 0 or length == self.maxlen:
            start = 0
        return SigmaIndex(self.case, "positive", start, length)

    def ideal(self, layer: int, i: int, k: int) -> SigmaIndex:
        return SigmaIndex(self.case, f"ideal{layer}", i, k)

    @staticmethod
    def layer_of(idx: SigmaIndex) -> int:
        return int(idx.part[-1])

    def e_element(self, a: int) -> Combination:
        if self.case == "Odd":
            return {self.ideal(0, 0, 0) if a == 0 else self.ideal(0, self.top, self.top): self.ctx.one()}
        return {self.ideal(a, 0, 0): self.ctx.one()}

    def basis_element(self, idx: SigmaIndex) -> Combination:
        return {idx: self.ctx.one()}

    # ------------------------------------------------------------ actions
    def _right_letter(self, comb: Combination, tok: GenToken) -> Combination:
        """comb * tok for an ideal-only combination."""
        pairs = []
        for idx, c in comb.items():
            L = self.layer_of(idx)
            row = self.layers[L].mats[tok].rows[idx.b]
            for j, x in enumerate(row):
                if x:
                    pairs.append((self.ideal(L, idx.a, j), c * x))
        return collect(pairs, self.ctx)

    def left_basis(self, tok: GenToken, idx: SigmaIndex) -> Combination:
        key = (tok, idx)
        hit = self._left.get(key)
        if hit is not None:
            return hit
        ctx = self.ctx
        one = ctx.one()
        if tok.is_x and tok in (X0i, X1i):
            a = tok.node
            pairs = list(self.left_basis(_X[a], idx).items())
            pairs += [(k, -self.m[a] * v) for k, v in self.left_basis(_E[a], idx).items()]
            pairs.append((idx, self.m[a]))
            out = collect(pairs, ctx)
        elif idx.part != "positive":
            L = self.layer_of(idx)
            row = self.layers[L].mats[tok].rows[idx.a]
            out = collect([(self.ideal(L, j, idx.b), x) for j, x in enumerate(row) if x], ctx)
        elif tok.is_e:
            out = self.e_element(tok.node)
            for letter in self.words[idx]:
                out = self._right_letter(out, letter)
        else:
            a = tok.node
            start, length = idx.a, idx.b
            if length == 0:
                out = {self.pos(a, 1): one}
            elif start == a or length == self.maxlen:
                # X_a X_a P' = P' + m l E_a P' - m X_a P'
                rest = self.pos(1 - a, length - 1)
                pairs = [(rest, one), (idx, -self.m[a])]
                ml = self.m[a] * self.l[a]
                pairs += [(k, ml * v) for k, v in self.left_basis(_E[a], rest).items()]
                out = collect(pairs, ctx)
            else:
                out = {self.pos(a, length + 1): one}
        self._left[key] = out
        return out

    def left_mul(self, tok: GenToken, comb: Combination) -> Combination:
        pairs = []
        for idx, c in comb.items():
            for k, v in self.left_basis(tok, idx).items():
                pairs.append((k, c * v))
        return collect(pairs, self.ctx)

    def reduce_word(self, w: Word) -> Combination:
        out = {self.unit: self.ctx.one()}
        for tok in reversed(w):
            out = self.left_mul(tok, out)
        return out

    def reduce_terms(self, terms) -> Combination:
        pairs = []
        for c, w in terms:
            for k, v in self.reduce_word(w).items():
                pairs.append((k, self.spec(c) * v))
        return collect(pairs, self.ctx)

    # ------------------------------------------------------------ products
    def split_first(self, idx: SigmaIndex):
        """(first letter, remaining basis index) with word(idx) = letter + word(rest)."""
        if idx.part == "positive":
            start, length = idx.a, idx.b
            if length == 0:
                return None
            return _X[start], self.pos(1 - start, length - 1)
        L = self.layer_of(idx)
        if idx.a > 0:
            return self.words[idx][0], self.ideal(L, idx.a - 1, idx.b)
        w = self.words[idx]
        rest = w[1:]
        e = w[0]
        if not rest:
            return e, self.unit
        return e, self.pos(rest[0].node, len(rest))

    def product(self, x: SigmaIndex, y: SigmaIndex) -> Combination:
        key = (x, y)
        hit = self._prod.get(key)
        if hit is not None:
            return hit
        sp = self.split_first(x)
        if sp is None:
            out = {y: self.ctx.one()}
        else:
            tok, rest = sp
            out = self.left_mul(tok, self.product(rest, y))
        self._prod[key] = out
        return out

    def multiply(self, a: Combination, b: Combination) -> Combination:
        pairs = []
        for x, cx in a.items():
            for y, cy in b.items():
                c = cx * cy
                for k, v in self.product(x, y).items():
                    pairs.append((k, c * v))
        return collect(pairs, self.ctx)

    # ------------------------------------------------------------ representation
    def rep_image(self, comb: Combination, layer: int = 0):
        """The matrix of a combination in the LK representation of the given layer."""
        rep = self.layers[layer]
        total = None
        for idx, c in comb.items():
            M = eval_word(rep, self.words[idx]) * c
            total = M if total is None else total + M
        if total is None:
            from .matcore import SquareMatrix
            return SquareMatrix.zeros(self.ctx, rep.dim)
        return total


# ---------------------------------------------------------------- structure constants

@dataclass
class StructureConstants:
    n: int
    case_tag: str
    basis: list
    words: list
    table: dict = field(repr=False)

    def to_json(self) -> dict:
        order = {idx: k for k, idx in enumerate(self.basis)}
        table = {}
        for (x, y), comb in sorted(self.table.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]])):
            table[f"{order[x]},{order[y]}"] = [[str(order[k]), canonical_string(v)]
                                              for k, v in sorted(comb.items(), key=lambda kv: order[kv[0]])]
        return {"case": self.case_tag.lower(), "n": self.n, "basis": [format_word(w) for w in self.words],
                "table": table}


_ALGEBRAS: dict = {}


def get_algebra(case_tag: str, n: int, tied: bool = False) -> DihedralAlgebra:
    key = (_norm_case(case_tag), n, tied)
    if key not in _ALGEBRAS:
        _ALGEBRAS[key] = DihedralAlgebra(case_tag, n, tied)
    return _ALGEBRAS[key]


def reduce_word(case_tag: str, n: int, w: Word) -> Combination:
    return get_algebra(case_tag, n).reduce_word(w)


def structure_constants(case_tag: str, n: int, tied: bool = False) -> StructureConstants:
    cap = size_caps()["sc"]
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the structure-constant cap {cap}; raise it with BMW_CHECK_CAP=sc=...")
    alg = get_algebra(case_tag, n, tied)
    table = {(x, y): alg.product(x, y) for x in alg.basis for y in alg.basis}
    return StructureConstants(n, alg.case, list(alg.basis), [alg.words[i] for i in alg.basis], table)


def associativity_check(alg: DihedralAlgebra, seed: int, samples: int = 200) -> RelationReport:
    rng = random.Random(seed)
    out = RelationReport()
    one = alg.ctx.one()
    for s in range(samples):
        x, y, z = (rng.choice(alg.basis) for _ in range(3))
        left = alg.multiply(alg.product(x, y), {z: one})
        right = alg.multiply({x: one}, alg.product(y, z))
        out.add("ASSOC", (("sample", s), ("x", x.label()), ("y", y.label()), ("z", z.label())),
                comb_equal(left, right), "(x y) z = x (y z)")
    return out


def unit_check(alg: DihedralAlgebra) -> RelationReport:
    out = RelationReport()
    for x in alg.basis:
        e = {x: alg.ctx.one()}
        ok = comb_equal(alg.product(alg.unit, x), e) and comb_equal(alg.product(x, alg.unit), e)
        out.add("UNIT", (("x", x.label()),), ok, "1 x = x 1 = x")
    return out


def basis_fixed_check(alg: DihedralAlgebra) -> RelationReport:
    """reduce_word of each basis word gives back that basis element."""
    out = RelationReport()
    for idx in alg.basis:
        ok = comb_equal(alg.reduce_word(alg.words[idx]), {idx: alg.ctx.one()})
        out.add("FIX", (("x", idx.label()),), ok, "reduce(word(x)) = x")
    return out


_TOKENS = (X0, X1, X0i, X1i, E0, E1)


def random_words(seed: int, count: int, max_len: int) -> list:
    rng = random.Random(seed)
    return [tuple(rng.choice(_TOKENS) for _ in range(rng.randint(0, max_len))) for _ in range(count)]


def random_word_check(alg: DihedralAlgebra, seed: int, count: int = 200) -> RelationReport:
    """Random words reduce into the spanning set, and the reduction agrees with the
    LK representation(s): rho(reduce(w)) = rho(w)."""
    out = RelationReport()
    for s, w in enumerate(random_words(seed, count, 4 * alg.n)):
        comb = alg.reduce_word(w)
        inside = all(k in alg.order for k in comb)
        ok = inside
        for L, rep in alg.layers.items():
            ok = ok and alg.rep_image(comb, L) == eval_word(rep, w)
        out.add("WORD", (("sample", s), ("word", format_word(w))), ok, "reduce(w) lies in the span and rho(reduce(w)) = rho(w)")
    return out


def relations_in_algebra(alg: DihedralAlgebra, instances: list | None = None) -> RelationReport:
    insts = instances if instances is not None else defining_relations(alg)
    out = RelationReport()
    for inst in insts:
        ok = comb_equal(alg.reduce_terms(inst.lhs), alg.reduce_terms(inst.rhs))
        out.add(inst.rid, inst.index, ok, inst.describe())
    return out


def defining_relations(alg: DihedralAlgebra) -> list:
    if alg.case == "Odd":
        return odd_relation_instances(alg.n, alg.ctx)
    return even_relation_instances(alg.n, alg.ctx)


def sandwich_check(alg: DihedralAlgebra, seed: int, count: int = 100) -> RelationReport:
    """E_a x E_a is a scalar multiple of E_a."""
    out = RelationReport()
    for s, w in enumerate(random_words(seed, count, 2 * alg.n)):
        for a in (0, 1):
            e = alg.e_element(a)
            comb = alg.reduce_word((_E[a],) + w + (_E[a],))
            eidx = next(iter(e))
            ok = not comb or (comb.keys() == {eidx})
            out.add("SANDWICH", (("sample", s), ("a", a)), ok, f"E{a} x E{a} is a multiple of E{a}")
    return out


def ideal_absorption_check(alg: DihedralAlgebra) -> RelationReport:
    out = RelationReport()
    ideal = [x for x in alg.basis if x.part != "positive"]
    bad = []
    for x in alg.basis:
        for y in ideal:
            for prod in (alg.product(x, y), alg.product(y, x)):
                if any(k.part == "positive" for k in prod):
                    bad.append((x.label(), y.label()))
    out.add("IDEAL", (), not bad, "products with an ideal element stay in the ideal part",
            [{"x": a, "y": b} for a, b in bad[:4]] or None)
    if alg.case == "Even":
        nz = [(x.label(), y.label()) for x in ideal for y in ideal
              if x.part != y.part and alg.product(x, y)]
        out.add("LAYERS", (), not nz, "products of the two ideal layers vanish",
                [{"x": a, "y": b} for a, b in nz[:4]] or None)
    return out


def dimension_report(alg: DihedralAlgebra, seed: int, samples: int = 200) -> RelationReport:
    out = RelationReport()
    n = alg.n
    expected = 2 * (2 * n + 1) + (2 * n + 1) ** 2 if alg.case == "Odd" else 4 * n + 2 * n * n
    out.add("DIM", (("case", alg.case), ("n", n)), alg.dim == expected, f"|Sigma| = {expected} (got {alg.dim})")
    out.extend(basis_fixed_check(alg))
    out.extend(random_word_check(alg, seed, samples))
    return out


# ---------------------------------------------------------------- integrality

def _allowed_factors(alg: DihedralAlgebra, mode: str) -> list:
    R = alg.ctx.poly_ring
    gens = R.gens
    names = alg.ctx.variables
    g = dict(zip(names, gens))
    if alg.case == "Odd":
        return [] if mode == "strict" else [g["m"]]
    return [g["v0"] - 1, g["v0"] + 1, g["v1"] - 1, g["v1"] + 1]


def denominator_is_unit(s: Scalar, alg: DihedralAlgebra, mode: str) -> bool:
    if s.is_laurent_polynomial():
        return True
    den = _to_sympy(alg.ctx, s.den)
    allowed = _allowed_factors(alg, mode)
    _, factors = den.factor_list()
    for f, _ in factors:
        # Laurent monomials were already moved out of the denominator by canonicalization
        if not any(f == a or f == -a for a in allowed):
            return False
    return True


def integrality_check(sc: StructureConstants, mode: str = "strict") -> dict:
    """Denominators of the structure constants.

    Odd: strict allows only monomials in l; localized also allows powers of m.
    Even: denominators may be products of monomials and the factors of v_i^2 - 1."""
    if mode not in ("strict", "localized"):
        raise ValueError("mode is strict or localized")
    alg = get_algebra(sc.case_tag, sc.n)
    order = {idx: k for k, idx in enumerate(sc.basis)}
    violations = []
    total = 0
    for (x, y), comb in sc.table.items():
        for k, v in comb.items():
            total += 1
            if not denominator_is_unit(v, alg, mode):
                violations.append({"x": order[x], "y": order[y], "k": order[k], "value": canonical_string(v)})
    violations.sort(key=lambda d: (d["x"], d["y"], d["k"]))
    return {"case": sc.case_tag, "n": sc.n, "mode": mode, "coefficients": total,
            "violations": len(violations), "examples": violations[:10], "integral": not violations}


# ---------------------------------------------------------------- quotients and involutions

def hecke_projection(comb: Combination) -> Combination:
    return {k: v for k, v in comb.items() if k.part == "positive"}


def hecke_quotient_check(case_tag: str, n: int, tied: bool = False) -> RelationReport:
    alg = get_algebra(case_tag, n, tied)
    ctx = alg.ctx
    one = ctx.one()
    out = RelationReport()
    for a in (0, 1):
        lhs = hecke_projection(alg.reduce_word((_X[a], _X[a])))
        rhs = collect([(alg.unit, one), (alg.pos(a, 1), -alg.m[a])], ctx)
        out.add("HQ", (("i", a),), comb_equal(lhs, rhs), f"x{a}^2 = 1 - m x{a} modulo the ideal")
        full = alg.reduce_word((_X[a], _X[a]))
        out.add("HQ-raw", (("i", a),), not comb_equal(full, rhs),
                f"without the quotient X{a}^2 differs from 1 - m X{a} (control)")
    L = alg.maxlen
    from .words import alternating
    b0 = hecke_projection(alg.reduce_word(alternating(X0, X1, L)))
    b1 = hecke_projection(alg.reduce_word(alternating(X1, X0, L)))
    out.add("HB", (), comb_equal(b0, b1), "braid relation modulo the ideal")
    # closure: products of positive words project onto positive words consistently
    pos = [x for x in alg.basis if x.part == "positive"]
    bad = 0
    for x in pos:
        for y in pos:
            p = hecke_projection(alg.product(x, y))
            q = hecke_projection(alg.multiply(hecke_projection({x: one}), hecke_projection({y: one})))
            bad += not comb_equal(p, q)
    out.add("HQ-closed", (), bad == 0, "the ideal part is a two-sided ideal, so the quotient is an algebra")
    return out


def star(alg: DihedralAlgebra, comb: Combination) -> Combination:
    pairs = []
    for idx, c in comb.items():
        for k, v in alg.reduce_word(reverse(alg.words[idx])).items():
            pairs.append((k, c * v))
    return collect(pairs, alg.ctx)


def star_involution(case_tag: str, n: int, seed: int, samples: int = 100, tied: bool = False) -> RelationReport:
    alg = get_algebra(case_tag, n, tied)
    one = alg.ctx.one()
    out = RelationReport()
    for idx in alg.basis:
        s = star(alg, {idx: one})
        out.add("STAR2", (("x", idx.label()),), comb_equal(star(alg, s), {idx: one}), "*(*x) = x")
        if idx.part != "positive":
            out.add("STARC", (("x", idx.label()),), comb_equal(s, {alg.ideal(alg.layer_of(idx), idx.b, idx.a): one}),
                    "*(C_{i,j}) = C_{j,i}")
    rng = random.Random(seed)
    for s in range(samples):
        x, y = rng.choice(alg.basis), rng.choice(alg.basis)
        lhs = star(alg, alg.product(x, y))
        rhs = alg.multiply(star(alg, {y: one}), star(alg, {x: one}))
        out.add("STAR", (("sample", s), ("x", x.label()), ("y", y.label())), comb_equal(lhs, rhs),
                "*(x y) = *(y) *(x)")
    return out


_PSI = {X0: X0i, X0i: X0, X1: X1i, X1i: X1, E0: E0, E1: E1}


def psi_word(w: Word) -> Word:
    return tuple(_PSI[t] for t in w)


def psi_conjugation_check(case_tag: str, n: int, tied: bool = False) -> RelationReport:
    """Apply X_i -> X_i^-1, E_i -> E_i, bar on scalars to each defining relation and
    check that the image still holds in the algebra."""
    alg = get_algebra(case_tag, n, tied)
    ctx = alg.ctx
    insts = [i.map_terms(lambda c: conjugate(ctx, c), psi_word, rid=f"psi:{i.rid}")
             for i in defining_relations(alg)]
    return relations_in_algebra(alg, insts)


# ---------------------------------------------------------------- cellular structure

def cellular_lk_layer(case_tag: str, n: int, tied: bool = False) -> RelationReport:
    """For a in {X0, X1}: a C_{i,k} stays in the ideal layer, its coefficients over
    C_{j,k} do not depend on k and equal row i of the LK matrix of a."""
    alg = get_algebra(case_tag, n, tied)
    out = RelationReport()
    for L, rep in alg.layers.items():
        for tok in (X0, X1):
            M = rep.mats[tok]
            for i in range(alg.top + 1):
                first = None
                ok_layer = ok_indep = ok_rows = True
                for k in range(alg.top + 1):
                    comb = alg.reduce_word((tok,) + ideal_word(L if alg.case == "Even" else 0, i, k))
                    if any(x.part != f"ideal{L}" or x.b != k for x in comb):
                        ok_layer = False
                        continue
                    coeffs = tuple(comb.get(alg.ideal(L, j, k), alg.ctx.zero()) for j in range(alg.top + 1))
                    if first is None:
                        first = coeffs
                    elif coeffs != first:
                        ok_indep = False
                    if coeffs != M.rows[i]:
                        ok_rows = False
                out.add("CELL", (("layer", L), ("a", tok.value), ("i", i)), ok_layer and ok_indep and ok_rows,
                        "a C_{i,k} = sum_j rho(a)_{i,j} C_{j,k} for every k")
    return out


@dataclass
class Cell:
    lam: str
    S: str
    T: str
    comb: Combination


def lk_cells(alg: DihedralAlgebra) -> list:
    one = alg.ctx.one()
    cells = []
    for L in alg.layers:
        name = "LK" if alg.case == "Odd" else f"LK{L}"
        for i in range(alg.top + 1):
            for k in range(alg.top + 1):
                cells.append(Cell(name, str(i), str(k), {alg.ideal(L, i, k): one}))
    return cells


def parse_cells(alg: DihedralAlgebra, doc) -> tuple:
    """(point, list of Cell) from a cell-datum document.

    The document is a list of entries, or {"point": {...}, "cells": [...]}.  An entry
    carries lambda, S, T and either "word" or "terms": [[coefficient, word], ...]."""
    point = {}
    entries = doc
    if isinstance(doc, dict):
        point = {k: Fraction(str(v)) for k, v in doc.get("point", {}).items()}
        entries = doc.get("cells", [])
    if not isinstance(entries, list):
        raise ValueError("cells must be a list")
    cells = []
    for e in entries:
        for key in ("lambda", "S", "T"):
            if key not in e:
                raise ValueError(f"cell entry misses {key!r}")
        if "word" in e:
            terms = [(alg.ctx.one(), parse_word(e["word"]))]
        elif "terms" in e:
            terms = [(parse_scalar(alg.ctx, str(c)), parse_word(w)) for c, w in e["terms"]]
        else:
            raise ValueError("cell entry needs 'word' or 'terms'")
        cells.append(Cell(str(e["lambda"]), str(e["S"]), str(e["T"]), alg.reduce_terms(terms)))
    return point, cells


def _vector(alg: DihedralAlgebra, comb: Combination, point: dict) -> list:
    vec = [Fraction(0)] * alg.dim
    for k, v in comb.items():
        vec[alg.order[k]] = evaluate(v, point)
    return vec


def validate_cell_datum(alg: DihedralAlgebra, doc) -> RelationReport:
    """Check a user-supplied Hecke-layer cell datum together with the LK layer(s).

    Cell labels are ordered by first appearance, the LK layer(s) lowest.  (C1): the
    elements form a basis (rank at the document's point).  (C2): *(C_{S,T}) = C_{T,S}
    exactly.  (C3): for each generator a, a C_{S,T} is congruent, modulo the span of
    lower cells, to sum_{S'} r_a(S',S) C_{S',T} with r_a independent of T (at the point)."""
    point, user = parse_cells(alg, doc)
    cells = lk_cells(alg) + user
    missing = [v for v in alg.ctx.variables if v not in point]
    out = RelationReport()
    if missing:
        raise ValueError(f"the cell datum needs a point for {missing}")
    rank_of = {}
    for c in cells:
        if c.lam not in rank_of:
            rank_of[c.lam] = 0 if c.lam.startswith("LK") else len(rank_of) + 1
    # C1
    try:
        rows = [_vector(alg, c.comb, point) for c in cells]
    except PoleError as exc:
        raise ValueError(f"the point is a pole of some coefficient: {exc}") from None
    rank = rational_rank(rows) if rows else 0
    out.add("C1", (("cells", len(cells)), ("dim", alg.dim)), len(cells) == alg.dim and rank == alg.dim,
            f"{len(cells)} cell elements of rank {rank} in an algebra of dimension {alg.dim}")
    if rank != alg.dim or len(cells) != alg.dim:
        return out
    # C2
    key = {(c.lam, c.S, c.T): c for c in cells}
    for c in user:
        partner = key.get((c.lam, c.T, c.S))
        ok = partner is not None and comb_equal(star(alg, c.comb), partner.comb)
        out.add("C2", (("lambda", c.lam), ("S", c.S), ("T", c.T)), ok, "*(C_{S,T}) = C_{T,S}")
    # C3: coordinates in the cell basis at the point
    cols = [list(col) for col in zip(*rows)]
    pairs = []
    for c in user:
        if (c.lam, c.S) not in pairs:
            pairs.append((c.lam, c.S))
    for lam, S0 in pairs:
        same = [d for d in cells if d.lam == lam]
        Ss = sorted({d.S for d in same})
        for tok in (X0, X1, E0, E1):
            coeff_by_T = {}
            ok = True
            for T in sorted({d.T for d in same}):
                base = key.get((lam, S0, T))
                if base is None:
                    ok = False
                    continue
                image = alg.left_mul(tok, base.comb)
                coords = rational_solve(cols, _vector(alg, image, point))
                r = {}
                for d, x in zip(cells, coords):
                    if not x:
                        continue
                    rk = rank_of[d.lam]
                    if d.lam == lam:
                        if d.T != T:
                            ok = False
                        r[d.S] = x
                    elif rk > rank_of[lam] or (rk == rank_of[lam] and d.lam != lam):
                        ok = False
                coeff_by_T[T] = tuple(r.get(S, Fraction(0)) for S in Ss)
            if len(set(coeff_by_T.values())) > 1:
                ok = False
            out.add("C3", (("lambda", lam), ("S", S0), ("a", tok.value)), ok,
                    "a C_{S,T} = sum r_a(S',S) C_{S',T} modulo lower cells, r_a independent of T")
    return out
