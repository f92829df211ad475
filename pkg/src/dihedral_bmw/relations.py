"""Formal relation instances (weighted word sums) and pass/fail reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .matcore import SquareMatrix, mat_add, mat_scalar_mul
from .ringcore import RingContext, Scalar, canonical_string
from .words import Word, format_word

Terms = tuple  # of (Scalar, Word)


@dataclass(frozen=True)
class RelationInstance:
    rid: str
    index: tuple
    lhs: Terms
    rhs: Terms
    note: str = ""

    def label(self) -> str:
        idx = ",".join(f"{k}={v}" for k, v in self.index)
        return f"{self.rid}[{idx}]" if idx else self.rid

    def describe(self) -> str:
        return f"{format_terms(self.lhs)} = {format_terms(self.rhs)}"

    def map_terms(self, f_scalar: Callable, f_word: Callable, rid: str | None = None) -> "RelationInstance":
        lhs = tuple((f_scalar(c), f_word(w)) for c, w in self.lhs)
        rhs = tuple((f_scalar(c), f_word(w)) for c, w in self.rhs)
        return RelationInstance(rid or self.rid, self.index, lhs, rhs, self.note)


def format_terms(terms: Terms) -> str:
    if not terms:
        return "0"
    parts = []
    for c, w in terms:
        cs = canonical_string(c)
        parts.append(format_word(w) if cs == "1" else f"{cs}*{format_word(w)}")
    return " + ".join(parts)


def word_eq(rid: str, index: tuple, lhs: Word, rhs: Word, ctx: RingContext) -> RelationInstance:
    """lhs = rhs for two plain words."""
    one = ctx.one()
    return RelationInstance(rid, tuple(index), ((one, lhs),), ((one, rhs),))


def word_eq_scaled(rid: str, index: tuple, lhs: Word, coeff: Scalar, rhs: Word) -> RelationInstance:
    """lhs = coeff * rhs."""
    return RelationInstance(rid, tuple(index), ((coeff.ctx.one(), lhs),), ((coeff, rhs),))


@dataclass
class RelationRecord:
    rid: str
    index: tuple
    passed: bool
    relation: str
    witness: list | None = None  # nonzero entries of lhs - rhs when failing

    def to_json(self) -> dict:
        d = {"id": self.rid, "index": [list(p) for p in self.index], "status": "pass" if self.passed else "fail",
             "relation": self.relation}
        if self.witness:
            d["witness"] = self.witness
        return d


@dataclass
class RelationReport:
    records: list = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list:
        return [r for r in self.records if not r.passed]

    def ids(self) -> set:
        return {r.rid for r in self.records}

    def add(self, rid: str, index: tuple, passed: bool, relation: str, witness=None) -> None:
        self.records.append(RelationRecord(rid, tuple(index), passed, relation, witness))

    def extend(self, other: "RelationReport") -> None:
        self.records.extend(other.records)

    def to_json(self) -> list:
        return [r.to_json() for r in self.records]

    def __len__(self) -> int:
        return len(self.records)


def matrix_witness(diff: SquareMatrix, limit: int = 4) -> list:
    return [{"row": i, "col": j, "value": canonical_string(x)} for i, j, x in diff.nonzero_entries()[:limit]]


def evaluate_terms(terms: Terms, eval_word: Callable[[Word], SquareMatrix], ctx: RingContext,
                   dim: int) -> SquareMatrix:
    total = None
    for c, w in terms:
        m = mat_scalar_mul(eval_word(w), c)
        total = m if total is None else mat_add(total, m)
    if total is None:
        return SquareMatrix.zeros(ctx, dim)
    return total


def check_in_matrices(instances: Sequence[RelationInstance], eval_word: Callable[[Word], SquareMatrix],
                      ctx: RingContext, dim: int) -> RelationReport:
    report = RelationReport()
    for rel in instances:
        lhs = evaluate_terms(rel.lhs, eval_word, ctx, dim)
        rhs = evaluate_terms(rel.rhs, eval_word, ctx, dim)
        if lhs == rhs:
            report.add(rel.rid, rel.index, True, rel.describe())
        else:
            diff = mat_add(lhs, mat_scalar_mul(rhs, -1))
            report.add(rel.rid, rel.index, False, rel.describe(), matrix_witness(diff))
    return report
