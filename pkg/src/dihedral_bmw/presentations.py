"""Presentations of the BMW-type algebra B_Gamma and the Brauer-type algebra Br_Gamma
for an arbitrary Coxeter matrix Gamma, with export, parsing and rank-2 cross-checks.

Coefficients are sympy expressions in per-class symbols l_r, v_r, m_r, tau_r (BMW) or
tau_r, mu_r (Brauer), r being the smallest node of a class of nodes joined by odd edges.

Relation ids:
  N1 X_i - X_i^-1 = m_i (E_i - 1)         S1 S_i^2 = 1
  N2 X_i E_i = E_i X_i = l_i E_i           S2 S_i E_i = E_i S_i = E_i
  N3 E_i^2 = tau_i E_i                     (Brauer uses the same ids for the same shapes)
  N0 X_i X_i^-1 = X_i^-1 X_i = 1
  C1 X_i X_j = X_j X_i  C2 E_i E_j = E_j E_i  C3 X_i E_j = E_j X_i          (m_ij = 2)
  O1 braid  O2 [X_i X_j ...]_{2l} E_i = E_j [X_i X_j ...]_{2l}
  O3 E_i [X_j X_i ...]_{2k-1} E_i = l_i^-1 E_i, 1 <= k <= l                 (m_ij = 2l+1)
  V0 braid  V1 [X_i X_j ...]_{2l-1} E_j = E_j [X_i X_j ...]_{2l-1}
  V2 Delta_ij E_i = l_i v_i^-1 E_i
  V3 E_i [X_j X_i ...]_{4k+1} E_i = (m_j/m_i)(v_i^-1 + l_i^-1) E_i, 4k+1 < l
  V4 E_i [X_j X_i ...]_{4k+3} E_i = (v_i^-1 + l_i^-1) E_i, 4k+3 < l
  V5 E_i W E_j = 0 for every word W in X_i^+-, X_j^+-, E_i, E_j (schema)      (m_ij = 2l)
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import sympy as sp

from .lk_even import (build_even_rep, relation6_family)
from .lk_odd import (BRAUER, build_odd_rep, degenerate_rep, eval_word)
from .relations import RelationInstance, RelationReport, check_in_matrices
from .ringcore import (EVEN, ODD, RingContext, Scalar, m_even, tau_even,
                       tau_odd)
from .words import E0, E1, X0, X0i, X1, X1i, GenToken

INFINITY = 0  # encoding of m_ij = infinity in documents


# ------------------------------------------------------------------ Coxeter data

@dataclass(frozen=True)
class CoxeterMatrix:
    rank: int
    m: tuple  # m[i][j]; None stands for infinity

    def __post_init__(self):
        if self.rank < 1 or len(self.m) != self.rank or any(len(r) != self.rank for r in self.m):
            raise ValueError("Coxeter matrix must be square of size rank")
        for i in range(self.rank):
            if self.m[i][i] != 1:
                raise ValueError(f"diagonal entry m[{i}][{i}] must be 1")
            for j in range(self.rank):
                if self.m[i][j] != self.m[j][i]:
                    raise ValueError(f"Coxeter matrix is not symmetric at ({i},{j})")
                if i != j and self.m[i][j] is not None and self.m[i][j] < 2:
                    raise ValueError(f"off-diagonal entry m[{i}][{j}] must be >= 2 or infinity")

    @classmethod
    def from_rows(cls, rows) -> "CoxeterMatrix":
        conv = tuple(tuple(None if (i != j and x == INFINITY) else int(x) for j, x in enumerate(r))
                     for i, r in enumerate(rows))
        return cls(len(conv), conv)

    @classmethod
    def dihedral(cls, k: int) -> "CoxeterMatrix":
        return cls(2, ((1, k), (k, 1)))

    @classmethod
    def from_json(cls, doc) -> "CoxeterMatrix":
        if isinstance(doc, str):
            doc = json.loads(doc)
        rows = doc["m"]
        if int(doc.get("rank", len(rows))) != len(rows):
            raise ValueError("rank does not match the matrix size")
        return cls.from_rows(rows)

    def to_json(self) -> dict:
        return {"rank": self.rank,
                "m": [[INFINITY if x is None else x for x in r] for r in self.m]}

    def edges(self) -> list:
        return [(i, j, self.m[i][j]) for i in range(self.rank) for j in range(i + 1, self.rank)]


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def odd_classes(gamma: CoxeterMatrix) -> list:
    """Representative node of each node's class under the odd-edge closure."""
    uf = _UnionFind(gamma.rank)
    for i, j, mij in gamma.edges():
        if mij is not None and mij % 2 == 1:
            uf.union(i, j)
    return [uf.find(i) for i in range(gamma.rank)]


@dataclass(frozen=True)
class ParameterData:
    """Per-node parameter symbol names: BMW uses (l, v), Brauer uses (tau, mu)."""
    kind: str
    first: tuple
    second: tuple

    @classmethod
    def generic(cls, gamma: CoxeterMatrix, kind: str = "bmw") -> "ParameterData":
        reps = odd_classes(gamma)
        a, b = ("l", "v") if kind == "bmw" else ("tau", "mu")
        return cls(kind, tuple(f"{a}_{r}" for r in reps), tuple(f"{b}_{r}" for r in reps))

    def validate(self, gamma: CoxeterMatrix) -> None:
        if len(self.first) != gamma.rank or len(self.second) != gamma.rank:
            raise ValueError("one parameter pair per node is required")
        for i, j, mij in gamma.edges():
            if mij is not None and mij % 2 == 1:
                if self.first[i] != self.first[j] or self.second[i] != self.second[j]:
                    raise ValueError(f"edge ({i},{j}) with m={mij} is odd: parameters of nodes {i} and {j} must agree")

    def symbols(self, i: int) -> dict:
        a, b = self.first[i], self.second[i]
        if self.kind == "bmw":
            suffix = a.split("_", 1)[1] if "_" in a else str(i)
            return {"l": sp.Symbol(a), "v": sp.Symbol(b), "m": sp.Symbol(f"m_{suffix}"),
                    "tau": sp.Symbol(f"tau_{suffix}")}
        return {"tau": sp.Symbol(a), "mu": sp.Symbol(b)}

    def definitions(self) -> dict:
        if self.kind != "bmw":
            return {}
        out = {}
        for i in range(len(self.first)):
            s = self.symbols(i)
            out[str(s["m"])] = f"{s['v']} - {s['v']}^-1"
            out[str(s["tau"])] = f"({s['l']} - {s['l']}^-1)/{s['m']} + 1"
        return dict(sorted(out.items()))


# ------------------------------------------------------------------ words and relations

@dataclass(frozen=True, order=True)
class Letter:
    kind: str  # "X", "Xi", "E" or "S"
    node: int

    def __str__(self) -> str:
        return {"X": f"X{self.node}", "Xi": f"X{self.node}^-1", "E": f"E{self.node}", "S": f"S{self.node}"}[self.kind]


_LETTER_RE = re.compile(r"^(X|E|S)(\d+)(\^-1)?$")


def parse_letter(text: str) -> Letter:
    m = _LETTER_RE.match(text)
    if not m or (m.group(3) and m.group(1) != "X"):
        raise ValueError(f"bad letter {text!r}")
    kind = "Xi" if m.group(3) else m.group(1)
    return Letter(kind, int(m.group(2)))


def parse_pword(text: str) -> tuple:
    text = text.strip()
    if text in ("", "1"):
        return ()
    return tuple(parse_letter(t) for t in text.split())


def format_pword(w: tuple) -> str:
    return " ".join(str(x) for x in w) if w else "1"


def alt(a: Letter, b: Letter, N: int) -> tuple:
    return tuple(a if k % 2 == 0 else b for k in range(N))


def bracket_form(w: tuple) -> str:
    """Text with maximal alternating runs of length >= 3 written as [A B ...]_N."""
    out = []
    k = 0
    while k < len(w):
        j = k + 1
        if w[k].kind in ("X", "Xi", "S"):
            while (j < len(w) and w[j].kind == w[k].kind and w[j].node != w[j - 1].node
                   and (j - k < 2 or w[j] == w[j - 2])):
                j += 1
        if j - k >= 3:
            out.append(f"[{w[k]} {w[k + 1]} ...]_{j - k}")
        else:
            out.extend(str(x) for x in w[k:j])
        k = j
    return " ".join(out) if out else "1"


@dataclass(frozen=True)
class PresRelation:
    rid: str
    nodes: tuple
    index: tuple
    lhs: tuple  # of (sympy expr, word)
    rhs: tuple
    schema: bool = False
    note: str = ""

    def label(self) -> str:
        idx = ",".join(f"{k}={v}" for k, v in self.index)
        base = f"{self.rid}({','.join(map(str, self.nodes))})"
        return f"{base}[{idx}]" if idx else base


@dataclass
class Presentation:
    kind: str
    gamma: CoxeterMatrix
    params: ParameterData
    generators: list
    relations: list = field(default_factory=list)

    def counts(self) -> dict:
        out = {}
        for r in self.relations:
            out[r.rid] = out.get(r.rid, 0) + 1
        return dict(sorted(out.items()))


def _one():
    return sp.Integer(1)


def _terms(*pairs) -> tuple:
    return tuple((sp.sympify(c), tuple(w)) for c, w in pairs)


def _eq(rid, nodes, index, lhs_word, rhs_word, coeff=1, note="") -> PresRelation:
    return PresRelation(rid, tuple(nodes), tuple(index), _terms((1, lhs_word)), _terms((coeff, rhs_word)), False, note)


def bmw_presentation(gamma: CoxeterMatrix, params: ParameterData | None = None) -> Presentation:
    params = params or ParameterData.generic(gamma, "bmw")
    if params.kind != "bmw":
        raise ValueError("BMW presentations need (l, v) parameters")
    params.validate(gamma)
    rels = []
    gens = []
    for i in range(gamma.rank):
        X, Xi, E = Letter("X", i), Letter("Xi", i), Letter("E", i)
        gens += [str(X), str(Xi), str(E)]
        s = params.symbols(i)
        rels.append(PresRelation("N0", (i,), (("order", "x.xinv"),), _terms((1, (X, Xi))), _terms((1, ())),
                                 note="inverse generator"))
        rels.append(PresRelation("N0", (i,), (("order", "xinv.x"),), _terms((1, (Xi, X))), _terms((1, ())),
                                 note="inverse generator"))
        rels.append(PresRelation("N1", (i,), (), _terms((1, (X,)), (-1, (Xi,))), _terms((s["m"], (E,)), (-s["m"], ()))))
        rels.append(_eq("N2", (i,), (("side", "left"),), (X, E), (E,), s["l"]))
        rels.append(_eq("N2", (i,), (("side", "right"),), (E, X), (E,), s["l"]))
        rels.append(_eq("N3", (i,), (), (E, E), (E,), s["tau"]))
    for i, j, mij in gamma.edges():
        if mij is None:
            continue
        Xa, Xb, Ea, Eb = Letter("X", i), Letter("X", j), Letter("E", i), Letter("E", j)
        if mij == 2:
            rels.append(_eq("C1", (i, j), (), (Xa, Xb), (Xb, Xa)))
            rels.append(_eq("C2", (i, j), (), (Ea, Eb), (Eb, Ea)))
            rels.append(_eq("C3", (i, j), (("order", "Xi Ej"),), (Xa, Eb), (Eb, Xa)))
            rels.append(_eq("C3", (i, j), (("order", "Xj Ei"),), (Xb, Ea), (Ea, Xb)))
        elif mij % 2 == 1:
            half = (mij - 1) // 2
            rels.append(_eq("O1", (i, j), (), alt(Xa, Xb, mij), alt(Xb, Xa, mij)))
            for (p, q) in ((i, j), (j, i)):
                Xp, Xq, Ep, Eq = Letter("X", p), Letter("X", q), Letter("E", p), Letter("E", q)
                sp_ = params.symbols(p)
                rels.append(_eq("O2", (p, q), (), alt(Xp, Xq, 2 * half) + (Ep,), (Eq,) + alt(Xp, Xq, 2 * half)))
                for k in range(1, half + 1):
                    rels.append(_eq("O3", (p, q), (("k", k),), (Ep,) + alt(Xq, Xp, 2 * k - 1) + (Ep,), (Ep,),
                                    1 / sp_["l"]))
        else:
            half = mij // 2
            rels.append(_eq("V0", (i, j), (), alt(Xa, Xb, mij), alt(Xb, Xa, mij),
                            note="braid relation of the edge (absent from the per-edge list)"))
            for (p, q) in ((i, j), (j, i)):
                Xp, Xq, Ep, Eq = Letter("X", p), Letter("X", q), Letter("E", p), Letter("E", q)
                sp_, sq = params.symbols(p), params.symbols(q)
                rels.append(_eq("V1", (p, q), (), alt(Xp, Xq, mij - 1) + (Eq,), (Eq,) + alt(Xp, Xq, mij - 1)))
                rels.append(_eq("V2", (p, q), (), alt(Xp, Xq, mij) + (Ep,), (Ep,), sp_["l"] / sp_["v"]))
                base = 1 / sp_["v"] + 1 / sp_["l"]
                for k in range(half):
                    if 4 * k + 1 < half:
                        rels.append(_eq("V3", (p, q), (("k", k),), (Ep,) + alt(Xq, Xp, 4 * k + 1) + (Ep,), (Ep,),
                                        sq["m"] / sp_["m"] * base))
                    if 4 * k + 3 < half:
                        rels.append(_eq("V4", (p, q), (("k", k),), (Ep,) + alt(Xq, Xp, 4 * k + 3) + (Ep,), (Ep,), base))
                rels.append(PresRelation("V5", (p, q), (), _terms((1, (Ep, Letter("W", -1), Eq))), (), True,
                                         f"for every word W in X{p}^+-1, X{q}^+-1, E{p}, E{q}"))
    return Presentation("bmw", gamma, params, gens, rels)


def brauer_presentation(gamma: CoxeterMatrix, params: ParameterData | None = None) -> Presentation:
    params = params or ParameterData.generic(gamma, "brauer")
    if params.kind != "brauer":
        raise ValueError("Brauer presentations need (tau, mu) parameters")
    params.validate(gamma)
    rels = []
    gens = []
    for i in range(gamma.rank):
        S, E = Letter("S", i), Letter("E", i)
        gens += [str(S), str(E)]
        s = params.symbols(i)
        rels.append(_eq("S1", (i,), (), (S, S), ()))
        rels.append(_eq("S2", (i,), (("side", "left"),), (S, E), (E,)))
        rels.append(_eq("S2", (i,), (("side", "right"),), (E, S), (E,)))
        rels.append(_eq("N3", (i,), (), (E, E), (E,), s["tau"]))
    for i, j, mij in gamma.edges():
        if mij is None:
            continue
        Sa, Sb, Ea, Eb = Letter("S", i), Letter("S", j), Letter("E", i), Letter("E", j)
        if mij == 2:
            rels.append(_eq("C1", (i, j), (), (Sa, Sb), (Sb, Sa)))
            rels.append(_eq("C2", (i, j), (), (Ea, Eb), (Eb, Ea)))
            rels.append(_eq("C3", (i, j), (("order", "Si Ej"),), (Sa, Eb), (Eb, Sa)))
            rels.append(_eq("C3", (i, j), (("order", "Sj Ei"),), (Sb, Ea), (Ea, Sb)))
        elif mij % 2 == 1:
            half = (mij - 1) // 2
            rels.append(_eq("O1", (i, j), (), alt(Sa, Sb, mij), alt(Sb, Sa, mij)))
            for (p, q) in ((i, j), (j, i)):
                Sp, Sq, Ep, Eq = Letter("S", p), Letter("S", q), Letter("E", p), Letter("E", q)
                rels.append(_eq("O2", (p, q), (), alt(Sp, Sq, 2 * half) + (Ep,), (Eq,) + alt(Sp, Sq, 2 * half)))
                for k in range(1, half + 1):
                    rels.append(_eq("O3", (p, q), (("k", k),), (Ep,) + alt(Sq, Sp, 2 * k - 1) + (Ep,), (Ep,),
                                    params.symbols(p)["mu"]))
        else:
            half = mij // 2
            rels.append(_eq("V0", (i, j), (), alt(Sa, Sb, mij), alt(Sb, Sa, mij),
                            note="braid relation of the edge (absent from the per-edge list)"))
            for (p, q) in ((i, j), (j, i)):
                Sp, Sq, Ep, Eq = Letter("S", p), Letter("S", q), Letter("E", p), Letter("E", q)
                mp, mq = params.symbols(p)["mu"], params.symbols(q)["mu"]
                rels.append(_eq("V1", (p, q), (("side", "left"),), alt(Sp, Sq, mij - 1) + (Eq,), (Eq,)))
                rels.append(_eq("V1", (p, q), (("side", "right"),), (Eq,) + alt(Sp, Sq, mij - 1), (Eq,)))
                for k in range(half):
                    if 4 * k + 1 < half:
                        c = 2 * mq if half % 2 == 0 else mp + mq
                        rels.append(_eq("V3", (p, q), (("k", k),), (Ep,) + alt(Sq, Sp, 4 * k + 1) + (Ep,), (Ep,), c))
                    if 4 * k + 3 < half:
                        c = 2 * mp if half % 2 == 0 else mp + mq
                        rels.append(_eq("V4", (p, q), (("k", k),), (Ep,) + alt(Sq, Sp, 4 * k + 3) + (Ep,), (Ep,), c))
                rels.append(PresRelation("V5", (p, q), (), _terms((1, (Ep, Letter("W", -1), Eq))), (), True,
                                         f"for every word W in S{p}, S{q}, E{p}, E{q}"))
    return Presentation("brauer", gamma, params, gens, rels)


# ------------------------------------------------------------------ export and parsing

def _word_json(w: tuple) -> str:
    return " ".join("W" if x.kind == "W" else str(x) for x in w) if w else "1"


def _word_from_json(text: str) -> tuple:
    text = text.strip()
    if text in ("", "1"):
        return ()
    return tuple(Letter("W", -1) if t == "W" else parse_letter(t) for t in text.split())


def _coef_text(c) -> str:
    return sp.sstr(sp.sympify(c))


def _side_text(terms: tuple) -> str:
    if not terms:
        return "0"
    out = ""
    for c, w in terms:
        body = bracket_form(w) if all(x.kind != "W" for x in w) else _word_json(w)
        c = sp.sympify(c)
        neg = c.could_extract_minus_sign()
        cs = _coef_text(-c if neg else c)
        piece = body if cs == "1" else (f"({cs})" if body == "1" else f"({cs})*{body}")
        out += (" - " if out else "-") + piece if neg else (" + " if out else "") + piece
    return out


RANGE_NOTE = ("even-edge ranges use l = m_ij/2: V3 for 4k+1 < l, V4 for 4k+3 < l; "
              "the alternative reading 4k+1, 4k+3 <= 2l-1 is not emitted")


def presentation_to_json(p: Presentation) -> dict:
    return {
        "schema": 1,
        "kind": p.kind,
        "coxeter": p.gamma.to_json(),
        "parameters": {"first": list(p.params.first), "second": list(p.params.second),
                       "definitions": p.params.definitions()},
        "range_note": RANGE_NOTE,
        "generators": list(p.generators),
        "relations": [
            {"id": r.rid, "nodes": list(r.nodes), "index": [list(x) for x in r.index],
             "lhs": [[_coef_text(c), _word_json(w)] for c, w in r.lhs],
             "rhs": [[_coef_text(c), _word_json(w)] for c, w in r.rhs],
             "schema": r.schema, "note": r.note}
            for r in p.relations],
    }


def presentation_to_text(p: Presentation) -> str:
    lines = [f"# {p.kind} presentation, rank {p.gamma.rank}",
             "# coxeter " + json.dumps(p.gamma.to_json()["m"]),
             "# parameters " + " ".join(f"{a},{b}" for a, b in zip(p.params.first, p.params.second))]
    for k, v in p.params.definitions().items():
        lines.append(f"# {k} = {v}")
    lines.append(f"# {RANGE_NOTE}")
    lines.append("generators: " + " ".join(p.generators))
    for r in p.relations:
        tail = f"    [{r.note}]" if r.note else ""
        lines.append(f"{r.label()}: {_side_text(r.lhs)} = {_side_text(r.rhs)}{tail}")
    return "\n".join(lines) + "\n"


def export_presentation(p: Presentation, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(presentation_to_json(p), indent=1, sort_keys=False) + "\n"
    if fmt == "text":
        return presentation_to_text(p)
    raise ValueError("format is json or text")


def parse_presentation(doc) -> Presentation:
    if isinstance(doc, str):
        doc = json.loads(doc)
    if doc.get("schema") != 1:
        raise ValueError("unsupported presentation schema")
    gamma = CoxeterMatrix.from_json(doc["coxeter"])
    params = ParameterData(doc["kind"], tuple(doc["parameters"]["first"]), tuple(doc["parameters"]["second"]))
    names = {}
    for i in range(gamma.rank):
        names.update({str(s): s for s in params.symbols(i).values()})

    def coef(text):
        return sp.sympify(text, locals=names)

    rels = []
    for r in doc["relations"]:
        rels.append(PresRelation(r["id"], tuple(r["nodes"]), tuple(tuple(x) for x in r["index"]),
                                 tuple((coef(c), _word_from_json(w)) for c, w in r["lhs"]),
                                 tuple((coef(c), _word_from_json(w)) for c, w in r["rhs"]),
                                 bool(r.get("schema", False)), r.get("note", "")))
    return Presentation(doc["kind"], gamma, params, list(doc["generators"]), rels)


# ------------------------------------------------------------------ instantiation

def sympy_to_scalar(expr, mapping: dict, ctx: RingContext) -> Scalar:
    """Evaluate a sympy expression built from + * ^ over the given symbol -> Scalar map."""
    expr = sp.sympify(expr)
    if expr.is_Integer:
        return ctx(int(expr))
    if expr.is_Rational:
        return ctx.const(int(expr.p)) / ctx.const(int(expr.q))
    if expr.is_Symbol:
        if expr.name not in mapping:
            raise ValueError(f"no value for parameter {expr.name}")
        return mapping[expr.name]
    if expr.is_Add:
        out = ctx.zero()
        for a in expr.args:
            out = out + sympy_to_scalar(a, mapping, ctx)
        return out
    if expr.is_Mul:
        out = ctx.one()
        for a in expr.args:
            out = out * sympy_to_scalar(a, mapping, ctx)
        return out
    if expr.is_Pow and expr.exp.is_Integer:
        base = sympy_to_scalar(expr.base, mapping, ctx)
        e = int(expr.exp)
        return base ** e if e >= 0 else base.invert() ** (-e)
    raise ValueError(f"unsupported coefficient {expr}")


_TOKEN = {("X", 0): X0, ("X", 1): X1, ("Xi", 0): X0i, ("Xi", 1): X1i, ("E", 0): E0, ("E", 1): E1,
          ("S", 0): X0, ("S", 1): X1}


def _to_tokens(w: tuple, local: dict) -> tuple:
    return tuple(_TOKEN[(x.kind, local[x.node])] for x in w)


def instantiate(rel: PresRelation, local: dict, mapping: dict, ctx: RingContext) -> list:
    """RelationInstances over the two-letter alphabet (schemas are expanded over the
    finite family of alternating words used elsewhere)."""
    def side(terms):
        return tuple((sympy_to_scalar(c, mapping, ctx), _to_tokens(w, local)) for c, w in terms)

    idx = rel.index + (("nodes", ",".join(map(str, rel.nodes))),)
    if not rel.schema:
        return [RelationInstance(rel.rid, idx, side(rel.lhs), side(rel.rhs), rel.note)]
    (_, w), = rel.lhs
    ep, eq = _to_tokens((w[0],), local), _to_tokens((w[2],), local)
    out = []
    one = ctx.one()
    nmax = max(1, ctx_half(local))
    for W in relation6_family(nmax):
        out.append(RelationInstance(rel.rid, idx + (("W", " ".join(t.value for t in W) or "1"),),
                                    ((one, ep + W + eq),), ()))
    return out


def ctx_half(local: dict) -> int:
    return local.get("_half", 1)


def _edge_mapping(p: Presentation, i: int, j: int, ctx: RingContext) -> dict:
    si, sj = p.params.symbols(i), p.params.symbols(j)
    mapping = {}
    if ctx.case_tag == "Odd":
        m, l = ctx.var("m"), ctx.var("l")
        mapping.update({str(si["l"]): l, str(si["m"]): m, str(si["tau"]): tau_odd(ctx)})
    else:
        for s, node in ((si, 0), (sj, 1)):
            mapping.update({str(s["l"]): ctx.var(f"l{node}"), str(s["v"]): ctx.var(f"v{node}"),
                            str(s["m"]): m_even(ctx, node), str(s["tau"]): tau_even(ctx, node)})
    return mapping


def rank2_consistency(mij: int, tied: bool = False, perturb: str | None = None) -> RelationReport:
    """Instantiate every relation of the I2(mij) presentation in the LK matrices.

    Odd mij = 2n+1 uses the odd representation; even mij = 2n uses both components
    (tied=True restricts them to v1 = v0).  perturb="O3" replaces l^-1 by l in the O3
    coefficients, a control that must fail."""
    if mij < 3:
        raise ValueError("rank-2 checks need m_ij >= 3")
    gamma = CoxeterMatrix.dihedral(mij)
    p = bmw_presentation(gamma)
    out = RelationReport()
    local = {0: 0, 1: 1, "_half": mij // 2}
    if mij % 2 == 1:
        n = (mij - 1) // 2
        rep = build_odd_rep(n)
        mapping = _edge_mapping(p, 0, 1, ODD)
        insts = []
        for r in p.relations:
            if perturb and r.rid == perturb:
                r = PresRelation(r.rid, r.nodes, r.index, r.lhs,
                                 tuple((sp.sympify(c).subs({s: 1 / s for s in sp.sympify(c).free_symbols}), w)
                                       for c, w in r.rhs), r.schema, r.note)
            insts += instantiate(r, local, mapping, ODD)
        out.extend(check_in_matrices(insts, lambda w: eval_word(rep, w), ODD, rep.dim))
    else:
        n = mij // 2
        mapping = _edge_mapping(p, 0, 1, EVEN)
        insts = []
        for r in p.relations:
            insts += instantiate(r, local, mapping, EVEN)
        for which in (0, 1):
            rep = build_even_rep(n, which, EVEN, tied)
            these = [i.map_terms(rep.spec, lambda w: w) for i in insts] if tied else insts
            rr = check_in_matrices(these, lambda w, rep=rep: eval_word(rep, w), EVEN, rep.dim)
            for rec in rr.records:
                rec.index = rec.index + (("rep", which),)
            out.extend(rr)
    return out


def brauer_rank2_consistency(mij: int) -> RelationReport:
    """Odd edges only: the Brauer presentation instantiated in the l -> 1, m -> 0
    degeneration of the odd LK representation, with mu = 1."""
    if mij < 3 or mij % 2 == 0:
        raise ValueError("the Brauer cross-check covers odd m_ij >= 3")
    p = brauer_presentation(CoxeterMatrix.dihedral(mij))
    n = (mij - 1) // 2
    rep = degenerate_rep(n)
    s = p.params.symbols(0)
    mapping = {str(s["tau"]): BRAUER.var("tau"), str(s["mu"]): BRAUER.one()}
    local = {0: 0, 1: 1, "_half": mij // 2}
    insts = []
    for r in p.relations:
        insts += instantiate(r, local, mapping, BRAUER)
    return check_in_matrices(insts, lambda w: eval_word(rep, w), BRAUER, rep.dim)


def rename_nodes(p: Presentation, perm: list) -> list:
    """Relations of p with node i renamed perm[i], as a sorted list of comparable keys."""
    keys = []
    for r in p.relations:
        def ren(terms):
            return tuple((sp.srepr(sp.sympify(c)), tuple((x.kind, perm[x.node] if x.node >= 0 else -1) for x in w))
                         for c, w in terms)
        keys.append((r.rid, tuple(sorted(perm[x] for x in r.nodes)), ren(r.lhs), ren(r.rhs)))
    return sorted(keys)
