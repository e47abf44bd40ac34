"""Command line entry point: ``spforge COMMAND [options]``.

Exit status is 0 on success, 1 when a mathematical check fails (with
witnesses in the report) and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path as FilePath
from typing import Any

from .cy import build_complex, pairing, verify_augmentation, verify_d_squared
from .expr import ParseError
from .formats import (
    fixture_path,
    parse_group_file,
    parse_superpotential_file,
    parse_theta_file,
)
from .gl2 import RelationProfile, obstruction_report
from .groups import (
    CharacterTableError,
    GroupError,
    enumerate_group,
    is_in_sl,
    is_small,
    mckay_quiver,
    symplectic_reflections,
)
from .pbw import (
    CoherenceError,
    GeneratorSystem,
    ThetaError,
    ThetaMap,
    check_pbw,
    check_zero_pbw,
    deformation_space,
)
from .superpotential import SuperpotentialError, relation_generators


class InputError(Exception):
    pass


@dataclass
class Report:
    command: str
    inputs: dict[str, Any]
    verdict: str
    passed: bool = True
    dimension: int | None = None
    basis: list[str] = field(default_factory=list)
    witnesses: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    def structured(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "verdict": self.verdict,
            "dimension": self.dimension,
            "basis": self.basis,
            "witnesses": self.witnesses,
            "details": self.details,
        }

    def text(self) -> str:
        out = [f"command: {self.command}"]
        for k, v in self.inputs.items():
            out.append(f"{k}: {v}")
        out.append(f"verdict: {self.verdict}")
        if self.dimension is not None:
            out.append(f"dimension: {self.dimension}")
        if self.basis:
            out.append("basis:")
            out.extend(f"  {b}" for b in self.basis)
        for k, v in self.details.items():
            if isinstance(v, list):
                out.append(f"{k}:")
                out.extend(f"  {_flat(x)}" for x in v)
            else:
                out.append(f"{k}: {_flat(v)}")
        if self.witnesses:
            out.append("witnesses:")
            out.extend(f"  {w}" for w in self.witnesses)
        return "\n".join(out) + "\n"


def _flat(x) -> str:
    if isinstance(x, dict):
        return ", ".join(f"{k}={_flat(v)}" for k, v in x.items())
    if isinstance(x, (list, tuple)):
        return " ".join(_flat(v) for v in x)
    return str(x)


def _distance(d) -> int | str:
    return "inf" if d == math.inf else int(d)


def _resolve(name: str) -> FilePath:
    path = FilePath(name)
    if path.exists():
        return path
    shipped = fixture_path(name)
    if shipped.exists():
        return shipped
    raise InputError(f"{name}: no such file (also looked among the shipped fixtures)")


def _values(pairs: list[str] | None) -> dict[str, str]:
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise InputError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _load_phi(args):
    if not args.superpotential:
        raise InputError("--superpotential is required")
    return parse_superpotential_file(_resolve(args.superpotential))


def _load_group(args):
    spec = parse_group_file(_resolve(args.group), _values(args.set))
    G = enumerate_group(spec.generators, field_order=spec.order)
    return spec, G


# commands ------------------------------------------------------------------

def cmd_validate(args) -> Report:
    phi = _load_phi(args)
    rep = phi.check()
    details = {"degree": phi.degree, "kind": phi.kind, "terms": len(phi.element.terms),
               "twisted": "yes" if phi.is_twisted else "no"}
    witnesses = [] if rep.passed else [rep.message]
    return Report("validate", {"superpotential": args.superpotential}, "pass" if rep.passed else "fail",
                  rep.passed, None, [], witnesses, details)


def cmd_relations(args) -> Report:
    phi = _load_phi(args)
    k = args.k
    q = phi.quiver
    gens = [g for g in relation_generators(phi, k) if not g.is_zero]
    system = GeneratorSystem.of(phi.homogeneous(), k)
    basis = [f"delta_{q.format_path(g.path)} Phi = {g.element}" for g in gens]
    return Report("relations", {"superpotential": args.superpotential, "k": k}, "pass", True,
                  system.rank, basis, [], {"generators": len(gens)})


def cmd_deform(args) -> Report:
    phi = _load_phi(args)
    D = deformation_space(phi, args.k)
    details = {
        "unknowns": len(D.unknowns),
        "lower terms": [str(D.lower_terms(b)) for b in D.solution.basis],
    }
    return Report("deform", {"superpotential": args.superpotential, "k": args.k}, "pass", True,
                  D.dimension, D.relations_text(), [], details)


def cmd_pbw_check(args) -> Report:
    spec = parse_theta_file(_resolve(args.theta))
    theta = ThetaMap(spec.superpotential.homogeneous(), spec.k, spec.images)
    report = check_zero_pbw(theta) if args.zero else check_pbw(theta)
    witnesses = []
    details = {}
    for name, c in report.conditions.items():
        details[name] = "pass" if c.passed else "fail"
        witnesses.extend(f"{name}: {w}" for w in c.witnesses)
    return Report("pbw-check", {"theta": args.theta, "zero": bool(args.zero)},
                  "pass" if report.passed else "fail", report.passed, None, [], witnesses, details)


def cmd_cy_check(args) -> Report:
    phi = _load_phi(args)
    targets = [("base", phi)]
    if args.deformations:
        D = deformation_space(phi, phi.degree - 2)
        targets += [(f"deformation {i}", x) for i, x in enumerate(D.basis_superpotentials())]
    witnesses = []
    details = {}
    C = build_complex(phi.homogeneous())
    base = phi.homogeneous()
    blocks = [pairing(base, j) for j in range(phi.degree + 1)]
    bad_blocks = [f"W_{p.j}: block {blk}" for p in blocks for blk in p.offending()]
    witnesses += [f"pairing not perfect at {b}" for b in bad_blocks]
    details["pairing"] = "pass" if not bad_blocks else "fail"
    for label, x in targets:
        d2 = verify_d_squared(C, x)
        aug = verify_augmentation(C, x)
        details[f"{label}: d^2"] = "pass" if d2.passed else "fail"
        details[f"{label}: augmentation"] = "pass" if aug.passed else "fail"
        for msgs in d2.residuals.values():
            witnesses += [f"{label}: {m}" for m in msgs]
        witnesses += [f"{label}: {m}" for m in aug.residuals]
    ok = not witnesses
    return Report("cy-check", {"superpotential": args.superpotential, "deformations": bool(args.deformations)},
                  "pass" if ok else "fail", ok, None, [], witnesses, details)


def cmd_mckay(args) -> Report:
    spec, G = _load_group(args)
    M = mckay_quiver(G, dual=spec.dual, aliases=spec.aliases)
    q = M.quiver
    # reflections are only meaningful for a symplectic action
    refl = symplectic_reflections(G, dual=spec.dual) if spec.dual or (G.dimension == 2 and is_in_sl(G)) else None
    details = {
        "group order": G.order,
        "degrees": " ".join(str(d) for d in M.table.degrees),
        "adjacency": [" ".join(str(x) for x in row) for row in M.multiplicities],
        "arrows": [f"{a.name}: {q.vertices[a.tail]} -> {q.vertices[a.head]}" for a in q.arrows],
        "twist": " ".join(str(t) for t in M.twist),
        "small": "yes" if is_small(G) else "no",
        "in SL": "yes" if is_in_sl(G) else "no",
    }
    if refl is not None:
        details["symplectic reflection classes"] = refl.count
        details["predicted deformation dimension"] = refl.predicted_dimension
    inputs = {"group": args.group}
    if args.set:
        inputs["set"] = " ".join(args.set)
    return Report("mckay", inputs, "pass", True, q.num_vertices, [], [], details)


def cmd_obstruct(args) -> Report:
    if args.group:
        spec, G = _load_group(args)
        M = mckay_quiver(G, dual=spec.dual, aliases=spec.aliases)
        profile = RelationProfile.from_mckay(M)
        rep = obstruction_report(profile, M.quiver, M)
        q = M.quiver
        inputs = {"group": args.group}
    else:
        phi = _load_phi(args)
        profile = RelationProfile.from_superpotential(phi, 0)
        rep = obstruction_report(profile, phi.quiver)
        q = phi.quiver
        inputs = {"superpotential": args.superpotential}
    v = q.vertices
    details = {
        "Hom(R,V)": rep.hom_v,
        "Hom(R,S)": rep.hom_s,
        "relations": [f"{v[t]} -> {v[h]} distance {_distance(d)}" for t, h, d in rep.relations],
    }
    if rep.twist_distance is not None:
        details["twist distance >= 2"] = "yes" if rep.twist_distance.passed else "no"
        details["twist distances"] = [f"{v[i]} -> {v[t]} distance {_distance(d)}"
                                      for i, t, d in rep.twist_distance.distances]
    return Report("obstruct", inputs, rep.verdict, True, None, [], [], details)


COMMANDS = {
    "validate": cmd_validate,
    "relations": cmd_relations,
    "deform": cmd_deform,
    "pbw-check": cmd_pbw_check,
    "cy-check": cmd_cy_check,
    "mckay": cmd_mckay,
    "obstruct": cmd_obstruct,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spforge", description="Superpotential and PBW deformation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "structured"), default="text")
        return p

    p = common(sub.add_parser("validate", help="check the superpotential condition"))
    p.add_argument("--superpotential", required=True)
    p = common(sub.add_parser("relations", help="list the relation generators delta_p Phi"))
    p.add_argument("--superpotential", required=True)
    p.add_argument("--k", type=int, required=True)
    p = common(sub.add_parser("deform", help="solve for all k-coherent lower terms"))
    p.add_argument("--superpotential", required=True)
    p.add_argument("--k", type=int, required=True)
    p = common(sub.add_parser("pbw-check", help="check PBW conditions for a theta file"))
    p.add_argument("--theta", required=True)
    p.add_argument("--zero", action="store_true", help="check the zeroPBW condition instead")
    p = common(sub.add_parser("cy-check", help="verify the Calabi-Yau complex identities"))
    p.add_argument("--superpotential", required=True)
    p.add_argument("--deformations", action="store_true", help="also check every solver basis deformation")
    p = common(sub.add_parser("mckay", help="McKay quiver, twist and reflections of a group"))
    p.add_argument("--group", required=True)
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="template parameter")
    p = common(sub.add_parser("obstruct", help="GL2 obstruction analysis"))
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--group")
    src.add_argument("--superpotential")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="template parameter")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InputError, OSError, SuperpotentialError, GroupError, ThetaError, CoherenceError,
            CharacterTableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "structured":
        sys.stdout.write(json.dumps(report.structured(), indent=2) + "\n")
    else:
        sys.stdout.write(report.text())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
