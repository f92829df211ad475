"""Command-line front end: verify, certify and export.

Reports are JSON with "schema": 1, records sorted by (suite, id, index), no timing
fields, so identical (command, seed) pairs give byte-identical output.  Exit status is
0 iff every gating record passes, 1 otherwise, 2 on usage errors, 3 when sampling for a
certificate fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import algebra_span as alg_mod
from .lk_even import (aij_closed, aij_from_rep, build_even_rep, build_sequences,
                      check_invariance_even, delta_cycle_check, gram_even,
                      irreducibility_certificate_even, sequence_identities_check,
                      psi_automorphism_check, range_reading_report,
                      swap_parameters, inverse_expansion_check,
                      verify_relations_even)
from .lk_odd import (alpha_closed_form, build_odd_rep, check_invariance_odd,
                     degeneration_check, gram_odd, invariant_form_dimension,
                     irreducibility_certificate_odd, projector_alpha,
                     verify_relations_odd)
from .matcore import (CapExceeded, SamplingError, SquareMatrix, evaluate_matrix,
                      matrix_to_json)
from .presentations import (CoxeterMatrix, bmw_presentation,
                            brauer_presentation, export_presentation,
                            rank2_consistency)
from .relations import RelationReport
from .ringcore import EVEN, canonical_string, conjugate, parse_point
from .words import E0, E1, X0, X0i, X1, X1i

DEFAULT_SEED = 0xB3B0
ALGEBRA_MAX_N = 3


# ------------------------------------------------------------------ report assembly

class RunReport:
    def __init__(self, argv: list, seed: int | None):
        self.argv = list(argv)
        self.seed = seed
        self.records = []
        self.data = {}

    def add_report(self, suite: str, rep: RelationReport, gating: bool = True) -> None:
        for r in rep.records:
            d = r.to_json()
            d["suite"] = suite
            d["gating"] = gating
            self.records.append(d)

    def add(self, suite: str, rid: str, passed: bool, relation: str, index=(), gating: bool = True,
            witness=None) -> None:
        d = {"id": rid, "index": [list(p) for p in index], "status": "pass" if passed else "fail",
             "relation": relation, "suite": suite, "gating": gating}
        if witness:
            d["witness"] = witness
        self.records.append(d)

    @property
    def passed(self) -> bool:
        return all(r["status"] == "pass" for r in self.records if r["gating"])

    def to_json(self) -> dict:
        recs = sorted(self.records, key=lambda r: (r["suite"], r["id"], json.dumps(r["index"])))
        fails = [r for r in recs if r["status"] == "fail"]
        return {
            "schema": 1,
            "command": self.argv,
            "seed": self.seed,
            "summary": {"records": len(recs), "failures": len(fails),
                        "gating_failures": sum(1 for r in fails if r["gating"]),
                        "passed": self.passed},
            "checks": recs,
            "data": self.data,
        }


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


# ------------------------------------------------------------------ suites

def _algebra_suites(report: RunReport, case: str, n: int, seed: int, tied: bool = False) -> None:
    alg = alg_mod.get_algebra(case, n, tied)
    report.add_report("algebra.dimension", alg_mod.dimension_report(alg, seed))
    report.add_report("algebra.unit", alg_mod.unit_check(alg))
    report.add_report("algebra.associativity", alg_mod.associativity_check(alg, seed))
    report.add_report("algebra.relations", alg_mod.relations_in_algebra(alg))
    report.add_report("algebra.sandwich", alg_mod.sandwich_check(alg, seed))
    report.add_report("algebra.ideal", alg_mod.ideal_absorption_check(alg))
    report.add_report("algebra.hecke", alg_mod.hecke_quotient_check(case, n, tied))
    report.add_report("algebra.star", alg_mod.star_involution(case, n, seed, tied=tied))
    report.add_report("algebra.psi", alg_mod.psi_conjugation_check(case, n, tied))
    report.add_report("algebra.cell", alg_mod.cellular_lk_layer(case, n, tied))


def verify_odd(report: RunReport, n: int, seed: int, with_algebra: bool = True) -> None:
    rep = build_odd_rep(n)
    report.add_report("relations", verify_relations_odd(rep))
    A = projector_alpha(rep)
    report.add("projector", "ALPHA", A == alpha_closed_form(n), "projector coefficients = closed form",
               (("n", n),))
    report.add("form", "FORM", check_invariance_odd(rep, gram_odd(n)), "M G conj(M)^T = G for X0, X1",
               (("n", n),))
    if n <= 2:
        dim, point = invariant_form_dimension(rep, seed)
        report.add("form", "FORMDIM", dim == 1, f"invariant forms at one point span dimension {dim}",
                   (("n", n),))
        report.data["formdim_point"] = {k: str(v) for k, v in sorted(point.items())}
    cert = irreducibility_certificate_odd(rep, seed, A)
    report.add("irreducible", "DET", cert["certified"], f"det of the projector matrix is nonzero ({cert['method']})",
               (("n", n),))
    report.data["certificate"] = cert
    report.add_report("degeneration", degeneration_check(n))
    if with_algebra and n <= ALGEBRA_MAX_N:
        _algebra_suites(report, "odd", n, seed)


def verify_even(report: RunReport, n: int, seed: int, tied: bool = False, with_algebra: bool = True) -> None:
    report.add_report("sequences", sequence_identities_check(EVEN, 6))
    r0, r1 = build_even_rep(n, 0, EVEN, tied), build_even_rep(n, 1, EVEN, tied)
    report.add_report("relations", verify_relations_even(r0, r1))
    report.add_report("relations", delta_cycle_check(r0))
    exp = inverse_expansion_check(r0, 6)
    inside = RelationReport([r for r in exp.records if ("window", "inside") in r.index])
    beyond = RelationReport([r for r in exp.records if ("window", "beyond") in r.index])
    report.add_report("expansions", inside)
    report.add_report("expansions.beyond", beyond, gating=False)
    report.add_report("range.extended", range_reading_report(r0), gating=False)
    report.add_report("range.extended", range_reading_report(r1), gating=False)
    report.add_report("psi", psi_automorphism_check(n, EVEN, tied))
    closed = aij_closed(n)
    for rep in (r0, r1):
        want = closed.map(rep.spec) if rep.which == 0 else closed.map(swap_parameters).map(rep.spec)
        got = aij_from_rep(rep)
        report.add("projector", "AIJ", got == want, "projector coefficients = recursion", (("rep", rep.which),))
        sym = all(got.rows[j][i] == rep.spec(conjugate(EVEN, got.rows[i][j])) for i in range(n) for j in range(n))
        report.add("projector", "AIJ-SYM", sym, "a_ji = conj(a_ij)", (("rep", rep.which),))
        report.add("form", "FORM", check_invariance_even(rep, gram_even(n, rep.which)),
                   "M G conj(M)^T = G for X0, X1", (("rep", rep.which),))
    cert = irreducibility_certificate_even(r0, seed)
    report.add("irreducible", "DET", cert["certified"], "det of the projector matrix is nonzero", (("rep", 0),))
    report.data["certificate"] = cert
    if with_algebra and n <= ALGEBRA_MAX_N:
        _algebra_suites(report, "even", n, seed, tied)


def certify(report: RunReport, case: str, n: int, seed: int) -> None:
    if case == "odd":
        rep = build_odd_rep(n)
        cert = irreducibility_certificate_odd(rep, seed)
        report.add("irreducible", "DET", cert["certified"], f"det of the projector matrix is nonzero ({cert['method']})",
                   (("n", n),))
    else:
        rep = build_even_rep(n, 0)
        cert = irreducibility_certificate_even(rep, seed)
        lp = cert["limit_pattern"]
        report.add("irreducible", "DET", cert["certified"], "det of the projector matrix is nonzero", (("n", n),))
        report.add("irreducible", "LIMIT-OFFDIAG", lp["offdiag_near_limit_set"],
                   "off-diagonal entries within 1/10 of {3, 3/2, 6, 3/4} at eps = 1/1000", (("n", n),))
        report.add("irreducible", "LIMIT-DIAG", lp["diag_exceeds_1000"],
                   "diagonal entries exceed 1000 at eps = 1/1000", (("n", n),))
    report.data["certificate"] = cert


# ------------------------------------------------------------------ exports

def _matrix_doc(M: SquareMatrix, point: dict | None) -> dict:
    if point is None:
        return matrix_to_json(M)
    vals = evaluate_matrix(M, point)
    return {"dim": M.dim, "point": {k: str(v) for k, v in sorted(point.items())},
            "entries": [[str(x) for x in r] for r in vals]}


def _matrix_text(name: str, doc: dict) -> str:
    lines = [f"{name} ({doc['dim']}x{doc['dim']})"]
    lines += ["  [" + ", ".join(r) + "]" for r in doc["entries"]]
    return "\n".join(lines) + "\n"


def _render(mats: dict, fmt: str, point) -> str:
    docs = {k: _matrix_doc(v, point) for k, v in mats.items()}
    if fmt == "json":
        return _dump(docs)
    return "".join(_matrix_text(k, d) for k, d in docs.items())


def _rep_matrices(case: str, n: int, which: int, tied: bool) -> dict:
    if case == "odd":
        rep = build_odd_rep(n)
    else:
        rep = build_even_rep(n, which, EVEN, tied)
    return {t.value: rep.mats[t] for t in (X0, X1, X0i, X1i, E0, E1)}


# ------------------------------------------------------------------ argument handling

def _positive_n(case: str, n: int, parser: argparse.ArgumentParser) -> None:
    lo = 1 if case == "odd" else 2
    if n < lo:
        parser.error(f"--n must be >= {lo} for the {case} case")


def _point(text: str | None):
    return None if text is None else parse_point(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dihedral-bmw", description="Exact checks for dihedral BMW-type algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp_, case=True, n=True, which=False, seed=False, fmt=False, point=False, tied=False):
        if case:
            sp_.add_argument("--case", choices=("odd", "even"), required=True)
        if n:
            sp_.add_argument("--n", type=int, required=True)
        if which:
            sp_.add_argument("--which", type=int, choices=(0, 1), default=0)
        if seed:
            sp_.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
        if fmt:
            sp_.add_argument("--format", choices=("json", "text"), default="json")
        if point:
            sp_.add_argument("--point", default=None, help='evaluate at "var=p/q,..."')
        if tied:
            sp_.add_argument("--tied", action="store_true", help="even case: restrict to v1 = v0")
        sp_.add_argument("--out", default=None, help="output file (default stdout)")

    v = sub.add_parser("verify", help="run every check for one case and n")
    common(v, seed=True, tied=True)
    v.add_argument("--no-algebra", action="store_true", help="skip the structure-constant suites")
    common(sub.add_parser("rep", help="LK matrices"), which=True, fmt=True, point=True, tied=True)
    common(sub.add_parser("gram", help="invariant form"), which=True, fmt=True, point=True)
    common(sub.add_parser("alpha", help="projector coefficient matrix"), which=True, fmt=True, point=True)
    s = sub.add_parser("seq", help="even-case a/b sequences")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--format", choices=("json", "text"), default="json")
    s.add_argument("--b-rule", choices=("corrected", "literal"), default="corrected")
    s.add_argument("--out", default=None)
    common(sub.add_parser("sc", help="structure constants"), tied=True)
    pr = sub.add_parser("present", help="presentation for a Coxeter matrix")
    src = pr.add_mutually_exclusive_group(required=True)
    src.add_argument("--coxeter", help="JSON file {\"rank\": r, \"m\": [[...]]}, 0 = infinity")
    src.add_argument("--m", type=int, help="dihedral I2(m)")
    pr.add_argument("--kind", choices=("bmw", "brauer"), default="bmw")
    pr.add_argument("--format", choices=("json", "text"), default="json")
    pr.add_argument("--check", action="store_true", help="also run the rank-2 cross-check of every edge")
    pr.add_argument("--out", default=None)
    common(sub.add_parser("certify", help="irreducibility certificate"), seed=True)
    c = sub.add_parser("cells", help="validate a cell datum file against the algebra")
    common(c)
    c.add_argument("--datum", required=True)
    return p


def main(argv: list | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    cmd = args.command
    if hasattr(args, "case") and hasattr(args, "n"):
        _positive_n(args.case, args.n, parser)
    try:
        if cmd == "verify":
            report = RunReport(argv, args.seed)
            if args.case == "odd":
                verify_odd(report, args.n, args.seed, not args.no_algebra)
            else:
                verify_even(report, args.n, args.seed, args.tied, not args.no_algebra)
            _emit(_dump(report.to_json()), args.out)
            return 0 if report.passed else 1
        if cmd == "certify":
            report = RunReport(argv, args.seed)
            certify(report, args.case, args.n, args.seed)
            _emit(_dump(report.to_json()), args.out)
            return 0 if report.passed else 1
        if cmd == "rep":
            _emit(_render(_rep_matrices(args.case, args.n, args.which, args.tied), args.format, _point(args.point)),
                  args.out)
            return 0
        if cmd == "gram":
            G = gram_odd(args.n) if args.case == "odd" else gram_even(args.n, args.which)
            _emit(_render({"G": G}, args.format, _point(args.point)), args.out)
            return 0
        if cmd == "alpha":
            if args.case == "odd":
                A = alpha_closed_form(args.n)
            else:
                A = aij_closed(args.n)
                if args.which == 1:
                    A = A.map(swap_parameters)
            _emit(_render({"alpha": A}, args.format, _point(args.point)), args.out)
            return 0
        if cmd == "seq":
            if args.k < 1:
                parser.error("--k must be >= 1")
            s = build_sequences(EVEN, args.k, args.b_rule)
            doc = {"k": args.k, "b_rule": args.b_rule,
                   "a": [canonical_string(x) for x in s.a[:args.k + 1]],
                   "b": [canonical_string(x) for x in s.b[:args.k + 1]],
                   "a_primed": [canonical_string(x) for x in s.a_primed[:args.k + 1]],
                   "b_primed": [canonical_string(x) for x in s.b_primed[:args.k + 1]]}
            if args.format == "json":
                _emit(_dump(doc), args.out)
            else:
                _emit("".join(f"{name}_{i} = {x}\n" for name in ("a", "b", "a_primed", "b_primed")
                              for i, x in enumerate(doc[name])), args.out)
            return 0
        if cmd == "sc":
            sc = alg_mod.structure_constants(args.case, args.n, args.tied)
            _emit(_dump(sc.to_json()), args.out)
            return 0
        if cmd == "present":
            gamma = (CoxeterMatrix.dihedral(args.m) if args.m is not None
                     else CoxeterMatrix.from_json(Path(args.coxeter).read_text()))
            p = bmw_presentation(gamma) if args.kind == "bmw" else brauer_presentation(gamma)
            _emit(export_presentation(p, args.format), args.out)
            if args.check:
                ok = True
                for mij in sorted({m for _, _, m in gamma.edges() if m is not None and m >= 3}):
                    r = rank2_consistency(mij)
                    sys.stderr.write(f"edge m={mij}: {'pass' if r.all_passed else 'fail'} "
                                     f"({len(r.failures())} of {len(r)} failing)\n")
                    ok = ok and r.all_passed
                return 0 if ok else 1
            return 0
        if cmd == "cells":
            alg = alg_mod.get_algebra(args.case, args.n)
            report = RunReport(argv, None)
            report.add_report("cells", alg_mod.validate_cell_datum(alg, json.loads(Path(args.datum).read_text())))
            _emit(_dump(report.to_json()), args.out)
            return 0 if report.passed else 1
    except SamplingError as e:
        sys.stderr.write(f"sampling failed: {e}; retry with a different --seed\n")
        return 3
    except CapExceeded as e:
        sys.stderr.write(f"{e}\n")
        return 2
    except (ValueError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
