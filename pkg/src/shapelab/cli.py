"""Command-line front end: ``shapelab compute | verify | audit``.

Exit codes: 0 when everything passes, 1 when a verification fails, 2 on
bad input (unreadable file, schema error, unbound name, wrong kind).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Optional

from . import abgroup as ab
from .abgroup import ExactSequence, FpAbGroup
from .audit import CheckResult, property_suite
from .posets import cofinality_witness, find_top
from .serialize import FormatError, Workspace, group_to_json, kind_of, load
from .shapefunctors import (
    ModelError,
    compare_shape_cohomology,
    compare_shape_homology,
    excision_pipeline,
    naturality_audit,
    verify_system_equivalence,
)
from .simplicial import ComplexError, as_pair, coeff_name, homology_data, long_exact_sequence, parse_coeff
from .systems import (
    SystemCheckError,
    limit_of,
    limit_of_morphism,
    morphisms_equivalent,
    restrict_to_cofinal,
    top_element_oracle,
    validate_morphism,
    validate_system,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def max_degree() -> int:
    raw = os.environ.get("SHAPELAB_MAX_DEGREE", "3")
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"SHAPELAB_MAX_DEGREE must be an integer, got {raw!r}")
    if value < 0:
        raise InputError("SHAPELAB_MAX_DEGREE must be nonnegative")
    return value


def canonical_text(G: FpAbGroup) -> str:
    free, torsion = G.canonical_form()
    extra = f"; invariant factors {', '.join(map(str, torsion))}" if torsion else ""
    return f"{G} (free rank {free}{extra})"


def group_summary(G: FpAbGroup) -> dict:
    free, torsion = G.canonical_form()
    return {"text": str(G), "free_rank": str(free), "invariant_factors": [str(t) for t in torsion], "presentation": group_to_json(G)}


def _matrix_rows(h) -> list[list[str]]:
    return [[str(v) for v in row] for row in h.matrix.to_rows()]


@dataclass
class Report:
    command: str
    kind: str
    lines: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str, passed: bool, detail: str = "", witness: Any = None) -> None:
        self.checks.append(CheckResult(name, bool(passed), detail, witness))

    def render_text(self) -> str:
        out = list(self.lines)
        for c in self.checks:
            line = f"{'PASS' if c.passed else 'FAIL'} {c.name}"
            if c.detail:
                line += f": {c.detail}"
            out.append(line)
        if self.checks:
            n_fail = sum(not c.passed for c in self.checks)
            out.append(f"{len(self.checks) - n_fail}/{len(self.checks)} checks passed")
        return "\n".join(out)

    def render_json(self) -> str:
        body = {"command": self.command, "kind": self.kind, **self.data}
        if self.checks:
            body["checks"] = [
                {"name": c.name, "status": "PASS" if c.passed else "FAIL", "detail": c.detail, "witness": _jsonable(c.witness)}
                for c in self.checks
            ]
            body["passed"] = self.passed
        return json.dumps(body, indent=2, sort_keys=True)


def _jsonable(x: Any) -> Any:
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return repr(x)


# -- loading ----------------------------------------------------------------------------


def load_target(path: str, name: Optional[str]) -> Any:
    value = load(path)
    if isinstance(value, Workspace):
        if name is None:
            raise InputError(f"{path} is a workspace; choose a binding with --name ({', '.join(value.names())})")
        return value[name]
    if name is not None:
        raise InputError(f"{path} holds a single {kind_of(value)}; --name applies only to workspaces")
    return value


def _expect(value: Any, *kinds: str) -> None:
    kind = kind_of(value)
    if kind not in kinds:
        raise InputError(f"expected {' or '.join(kinds)}, got {kind}")


def _degrees(args) -> list[int]:
    if args.degree is not None:
        if args.degree < 0:
            raise InputError("--degree must be nonnegative")
        return [args.degree]
    return list(range(max_degree() + 1))


# -- compute --------------------------------------------------------------------------------


def cmd_compute(args) -> Report:
    value = load_target(args.file, args.name)
    rep = Report("compute", args.kind)
    coeff = parse_coeff(args.coeff)
    if args.kind in ("colimit", "limit"):
        _expect(value, "system")
        try:
            validate_system(value)
        except SystemCheckError as e:
            raise InputError(f"invalid system: {e.kind} at {e.witness}")
        want = "direct" if args.kind == "colimit" else "inverse"
        if value.variance != want:
            raise InputError(f"{args.kind} needs a {want} system")
        L = limit_of(value)
        rep.lines.append(canonical_text(L.group))
        rep.data["group"] = group_summary(L.group)
        if args.projections:
            for a, p in enumerate(L.projections):
                arrow = f"X_{a} -> {args.kind}" if args.kind == "colimit" else f"{args.kind} -> X_{a}"
                rep.lines.append(f"  {arrow}: {p.matrix.to_rows()}")
            rep.data["projections"] = [_matrix_rows(p) for p in L.projections]
        return rep
    if args.kind in ("homology", "cohomology"):
        _expect(value, "complex", "pair")
        results = []
        for n in _degrees(args):
            G = homology_data(value, n, coeff, cohomology=args.kind == "cohomology").group
            results.append({"degree": str(n), "group": group_summary(G)})
            rep.lines.append(canonical_text(G) if args.degree is not None else f"degree {n}: {canonical_text(G)}")
        rep.data.update(coefficients=coeff_name(coeff), results=results)
        return rep
    if args.kind in ("shape-homology", "shape-cohomology"):
        _expect(value, "model")
        compare = compare_shape_homology if args.kind == "shape-homology" else compare_shape_cohomology
        results = []
        for n in _degrees(args):
            c = compare(value, n, coeff)
            text = canonical_text(c.group)
            rep.lines.append(text if args.degree is not None else f"degree {n}: {text}")
            entry = {"degree": str(n), "group": group_summary(c.group), "matches_total": c.is_isomorphism}
            if args.projections:
                entry["projections"] = [_matrix_rows(p) for p in c.limit.projections]
                entry["comparison"] = _matrix_rows(c.comparison)
                for a, p in enumerate(c.limit.projections):
                    rep.lines.append(f"  member {a}: {p.matrix.to_rows()}")
                rep.lines.append(f"  comparison with total: {c.comparison.matrix.to_rows()}")
            results.append(entry)
            rep.check(f"degree {n} agrees with the total space", c.is_isomorphism, "mediating map is an isomorphism" if c.is_isomorphism else "mediating map is not an isomorphism")
        rep.data.update(coefficients=coeff_name(coeff), results=results)
        return rep
    raise InputError(f"unknown compute kind {args.kind}")


# -- verify --------------------------------------------------------------------------------


def _verify_system(rep: Report, S) -> None:
    try:
        validate_system(S)
        rep.check("system axioms", True, "identities and composition hold")
    except SystemCheckError as e:
        rep.check("system axioms", False, f"{e.kind} at {e.witness}", e.witness)


def _verify_morphism(rep: Report, F) -> None:
    for label, S in (("source", F.source), ("target", F.target)):
        try:
            validate_system(S)
            rep.check(f"{label} system axioms", True)
        except SystemCheckError as e:
            rep.check(f"{label} system axioms", False, f"{e.kind} at {e.witness}", e.witness)
    try:
        validate_morphism(F)
        rep.check("commuting squares", True)
    except SystemCheckError as e:
        rep.check("commuting squares", False, f"{e.kind} at {e.witness}", e.witness)


def _verify_sequence(rep: Report, E: ExactSequence) -> None:
    for i, defect in E.audit():
        label = E.label(i)
        if defect is None:
            rep.check(f"exact at position {i} ({label})", True)
        else:
            rep.check(f"exact at position {i} ({label})", False, f"{defect.kind}, element {list(defect.element)}", [i, defect.kind, list(defect.element)])


def _verify_cofinality(rep: Report, S, subset: Optional[list[int]]) -> None:
    try:
        validate_system(S)
    except SystemCheckError as e:
        raise InputError(f"invalid system: {e.kind} at {e.witness}")
    sub = subset if subset is not None else [find_top(S.index)]
    if any(not 0 <= s < S.size for s in sub):
        raise InputError("subset element out of range")
    w = cofinality_witness(sub, S.index)
    rep.check("subset is cofinal", w is None, "" if w is None else f"nothing in the subset lies above {w}", w)
    if w is None:
        try:
            _, inj = restrict_to_cofinal(S, sub)
            rep.check("restriction induces an isomorphism of limits", ab.is_isomorphism(limit_of_morphism(inj)))
        except SystemCheckError as e:
            rep.check("restriction induces an isomorphism of limits", False, f"{e.kind} at {e.witness}", e.witness)
    group_ok, proj_ok = top_element_oracle(S)
    rep.check("limit matches the top object", group_ok and proj_ok)


def _verify_excision(rep: Report, inst: dict, args) -> None:
    coeff = parse_coeff(args.coeff)
    report = excision_pipeline(inst["model"], inst["remove"], _degrees(args), coeff, strict=inst["strict"])
    rep.check("admissible members are cofinal", report.admissible_cofinal, f"admissible members {list(report.admissible)}")
    rep.check("their preimage is cofinal in the auxiliary index", report.preimage_cofinal)
    for d in report.degrees:
        n = d.degree
        rep.check(f"degree {n}: cofinal criterion for J", bool(d.criterion_J), _criterion_text(d.criterion_J))
        rep.check(f"degree {n}: cofinal criterion for G", bool(d.criterion_G), _criterion_text(d.criterion_G))
        rep.check(f"degree {n}: G o J equivalent to the inclusion morphism", bool(d.composite_matches_inclusion))
        rep.check(f"degree {n}: limit map factors as g o j", d.factorization_holds)
        rep.check(f"degree {n}: excision map is an isomorphism", d.inclusion_is_iso)


def _criterion_text(v) -> str:
    if v.holds:
        return "limit map is an isomorphism" if v.limit_is_iso else "conditions hold"
    return f"condition ({v.reason}) fails at index {v.witness}"


def _verify_naturality(rep: Report, inst: dict, args) -> None:
    coeff = parse_coeff(args.coeff)
    for n in _degrees(args):
        r = naturality_audit(inst["map"], inst["source_model"], inst["target_model"], n, coeff)
        bad = [a for a, ok in enumerate(r.squares) if not ok]
        rep.check(f"degree {n}: per-member squares commute", not bad, "" if not bad else f"fails at member {bad[0]}", bad[:1] or None)
        rep.check(f"degree {n}: system-level square", bool(r.systems_equivalent), "" if r.systems_equivalent else f"no reconciling index for {r.systems_equivalent.failed_at}")
        rep.check(f"degree {n}: limit-level square", r.limit_square)


def _verify_equivalence(rep: Report, inst: dict) -> None:
    F, G = inst["F"], inst["G"]
    if inst["mode"] == "similar":
        try:
            v = morphisms_equivalent(F, G)
        except SystemCheckError as e:
            raise InputError(f"morphisms are not comparable: {e.kind}")
        detail = "" if v else f"no common index reconciles index {v.failed_at}"
        rep.check("morphisms are equivalent", bool(v), detail, v.failed_at)
        return
    try:
        cert = verify_system_equivalence(F, G)
    except SystemCheckError as e:
        raise InputError(f"morphisms do not run in opposite directions: {e.kind}")
    rep.check("G o F equivalent to identity", bool(cert.gf_identity), "" if cert.gf_identity else f"fails at index {cert.gf_identity.failed_at}", cert.gf_identity.failed_at)
    rep.check("F o G equivalent to identity", bool(cert.fg_identity), "" if cert.fg_identity else f"fails at index {cert.fg_identity.failed_at}", cert.fg_identity.failed_at)
    if cert.accepted:
        rep.check("limits are isomorphic", bool(cert.limits_agree))


def cmd_verify(args) -> Report:
    value = load_target(args.file, args.name)
    rep = Report("verify", args.kind)
    if args.kind == "system":
        _expect(value, "system")
        _verify_system(rep, value)
    elif args.kind == "morphism":
        _expect(value, "morphism")
        _verify_morphism(rep, value)
    elif args.kind == "exactness":
        _expect(value, "sequence", "complex", "pair")
        if isinstance(value, ExactSequence):
            _verify_sequence(rep, value)
        else:
            top = args.degree if args.degree is not None else max_degree()
            E = long_exact_sequence(as_pair(value), parse_coeff(args.coeff), top, cohomology=args.cohomology)
            _verify_sequence(rep, E)
    elif args.kind == "cofinality":
        _expect(value, "system", "cofinality")
        if isinstance(value, dict):
            _verify_cofinality(rep, value["system"], args.subset if args.subset is not None else value["subset"])
        else:
            _verify_cofinality(rep, value, args.subset)
    elif args.kind == "excision":
        _expect(value, "excision")
        _verify_excision(rep, value, args)
    elif args.kind == "naturality":
        _expect(value, "naturality")
        _verify_naturality(rep, value, args)
    elif args.kind == "equivalence":
        _expect(value, "equivalence")
        _verify_equivalence(rep, value)
    else:
        raise InputError(f"unknown verify kind {args.kind}")
    return rep


# -- audit ----------------------------------------------------------------------------------


def _audit_value(rep: Report, label: str, value: Any, args) -> None:
    sub = Report("verify", kind_of(value))
    kind = kind_of(value)
    if kind == "system":
        _verify_system(sub, value)
        if sub.passed:
            _verify_cofinality(sub, value, None)
    elif kind == "morphism":
        _verify_morphism(sub, value)
    elif kind == "sequence":
        _verify_sequence(sub, value)
    elif kind in ("complex", "pair"):
        for m in (0, 4):
            for coh in (False, True):
                E = long_exact_sequence(as_pair(value), m, max_degree(), cohomology=coh)
                ok = E.is_exact()
                sub.check(f"{'cohomology' if coh else 'homology'} sequence exact over {coeff_name(m)}", ok)
    elif kind == "model":
        for n in range(max_degree() + 1):
            sub.check(f"degree {n}: shape homology matches", compare_shape_homology(value, n).is_isomorphism)
            sub.check(f"degree {n}: shape cohomology matches", compare_shape_cohomology(value, n).is_isomorphism)
    elif kind == "excision":
        _verify_excision(sub, value, args)
    elif kind == "naturality":
        _verify_naturality(sub, value, args)
    elif kind == "equivalence":
        _verify_equivalence(sub, value)
    else:
        sub.lines.append(f"nothing to audit for a {kind}")
    for c in sub.checks:
        rep.checks.append(CheckResult(f"{label}: {c.name}", c.passed, c.detail, c.witness))


def cmd_audit(args) -> Report:
    rep = Report("audit", "corpus")
    for path in args.files:
        value = load(path)
        if isinstance(value, Workspace):
            for name in value.names():
                _audit_value(rep, f"{path}#{name}", value[name], args)
        else:
            _audit_value(rep, path, value, args)
    if args.count > 0:
        for c in property_suite(args.seed, args.count, min(2, max_degree())):
            rep.checks.append(CheckResult(f"random (seed {args.seed}): {c.name}", c.passed, c.detail, c.witness))
    return rep


# -- entry point ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shapelab", description="Shape (co)homology of finite filtered simplicial models.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree", type=int, help="single degree (default: 0..SHAPELAB_MAX_DEGREE)")
    common.add_argument("--coeff", default="z", help="coefficients: z or z/M (default z)")
    common.add_argument("--json", action="store_true", help="machine-readable report")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", parents=[common], help="compute a group")
    c.add_argument("kind", choices=["colimit", "limit", "homology", "cohomology", "shape-homology", "shape-cohomology"])
    c.add_argument("file")
    c.add_argument("--name", help="binding to use when FILE is a workspace")
    c.add_argument("--projections", action="store_true", help="also print the canonical maps")

    v = sub.add_parser("verify", parents=[common], help="run a check, exit 1 on failure")
    v.add_argument("kind", choices=["system", "morphism", "equivalence", "exactness", "excision", "naturality", "cofinality"])
    v.add_argument("file")
    v.add_argument("--name", help="binding to use when FILE is a workspace")
    v.add_argument("--cohomology", action="store_true", help="audit the cohomology sequence of a pair")
    v.add_argument("--subset", type=lambda s: [int(x) for x in s.split(",") if x.strip()], help="comma-separated indices for cofinality")

    a = sub.add_parser("audit", parents=[common], help="verify every artifact in the given files plus randomized properties")
    a.add_argument("files", nargs="*")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--count", type=int, default=20, help="randomized trials per property (0 disables)")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"compute": cmd_compute, "verify": cmd_verify, "audit": cmd_audit}[args.command]
    try:
        rep = handler(args)
    except (InputError, FormatError, ModelError, ComplexError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    print(rep.render_json() if args.json else rep.render_text())
    return EXIT_OK if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
