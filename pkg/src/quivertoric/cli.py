"""Command-line frontend: quiver queries, cone certificates, family checks.

Every command prints a deterministic report (text or JSON) and exits 0
exactly when every reported check passed; querying commands that merely
answer a question exit 0 once the answer is printed.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import family as fam
from .document import DocumentError, load_quiver, serialize_document
from .lattice import NotInConeError, all_cycle_vectors, cone_equality_scan, decompose_arrow_cone
from .quiver import CyclicQuiverError, SizeLimitError, dot_export, filters, primitive_cycles, validate


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
        return
    for check in payload.get("checks", ()):
        line = "%s: %s" % (check["name"], check["status"])
        if check.get("detail"):
            line += " (%s)" % check["detail"]
        print(line)
    for line in payload.get("lines", ()):
        print(line)


def _check(name: str, ok: bool, detail: str = "") -> dict:
    return {"name": name, "status": "PASS" if ok else "FAIL", "detail": detail}


def _report_checks(report: fam.Report) -> list:
    return [_check(item.name, item.ok, item.detail) for item in report.items]


def _parse_vector(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.replace(" ", "").split(",") if part != "")
    except ValueError:
        raise SystemExit("cannot parse integer vector %r" % text)


def _params(args) -> fam.FamilyParams:
    try:
        return fam.FamilyParams(args.p, args.q, args.r, args.s, args.t)
    except fam.InvalidParamsError as exc:
        raise SystemExit("invalid parameters: %s" % exc)


def cmd_quiver(args) -> int:
    quiver = load_quiver(args.file)
    payload = {"command": "quiver %s" % args.action, "checks": [], "lines": []}
    code = 0
    if args.action == "validate":
        try:
            validate(quiver)
            payload["checks"].append(_check("acyclic", True, "%d vertices, %d arrows"
                                            % (quiver.n_vertices, quiver.n_arrows)))
        except CyclicQuiverError as exc:
            payload["checks"].append(_check("acyclic", False, str(exc)))
            code = 1
    elif args.action == "filters":
        validate(quiver)
        found = filters(quiver)
        payload["count"] = len(found)
        payload["filters"] = [sorted(str(v) for v in f) for f in found]
        payload["lines"].append("%d filters" % len(found))
        payload["lines"].extend("{%s}" % ", ".join(sorted(str(v) for v in f)) for f in found)
    elif args.action == "cycles":
        validate(quiver)
        cycles = primitive_cycles(quiver)
        payload["count"] = len(cycles)
        payload["cycles"] = [
            ["%s%s" % (name, "+" if d > 0 else "-") for name, d in steps] for steps in cycles
        ]
        payload["lines"].append("%d primitive cycle classes" % len(cycles))
        payload["lines"].extend(" ".join(step) for step in payload["cycles"])
    elif args.action == "dot":
        validate(quiver)
        text = dot_export(quiver)
        payload["dot"] = text
        payload["lines"].append(text.rstrip("\n"))
    _emit(payload, args.format)
    return code


def cmd_cone(args) -> int:
    quiver = load_quiver(args.file)
    validate(quiver)
    payload = {"command": "cone %s" % args.action, "checks": [], "lines": []}
    code = 0
    if args.action in ("member", "decompose"):
        x = _parse_vector(args.vector)
        if len(x) != quiver.n_vertices:
            raise SystemExit("vector has length %d, quiver has %d vertices"
                             % (len(x), quiver.n_vertices))
        try:
            mult = decompose_arrow_cone(quiver, x)
            payload["member"] = True
            payload["decomposition"] = {
                str(quiver.arrows[j][0]): m for j, m in enumerate(mult) if m
            }
            payload["lines"].append("member: YES")
            payload["lines"].extend(
                "%s: %d" % (name, m) for name, m in payload["decomposition"].items()
            )
        except NotInConeError as exc:
            payload["member"] = False
            payload["certificate"] = (
                sorted(str(v) for v in exc.violated_filter)
                if exc.violated_filter is not None
                else None
            )
            payload["lines"].append("member: NO")
            payload["lines"].append(
                "violated filter: {%s}" % ", ".join(payload["certificate"])
                if payload["certificate"] is not None
                else "reason: %s" % exc.reason
            )
            if args.action == "decompose":
                code = 1
    else:  # brute-check
        result = cone_equality_scan(quiver, args.bound)
        payload["points"] = result.points
        payload["members"] = result.members
        if result.equal:
            payload["lines"].append(
                "EQUAL (%d points, %d members, bound %d)"
                % (result.points, result.members, args.bound)
            )
        else:
            payload["counterexample"] = list(result.counterexample)
            payload["lines"].append("COUNTEREXAMPLE %s: %s" % (result.counterexample, result.detail))
            code = 1
    _emit(payload, args.format)
    return code


def cmd_family(args) -> int:
    params = _params(args)
    payload = {
        "command": "family %s" % args.action,
        "params": list(params.as_tuple()),
        "seed": args.seed,
        "checks": [],
        "lines": [],
    }
    code = 0
    if args.action == "build":
        quiver = fam.toric_quiver(params)
        delta = fam.orbit_quiver(params)
        payload["document"] = serialize_document(quiver)
        payload["lines"].append(payload["document"].rstrip("\n"))
        payload["checks"].append(
            _check(
                "build",
                True,
                "thin: %d vertices %d arrows; marked: %d vertices %d arrows"
                % (quiver.n_vertices, quiver.n_arrows, delta.n_vertices, delta.n_arrows),
            )
        )
    elif args.action == "cycles":
        census = fam.match_cycles(params)
        if census.status == "not-strict":
            count = len(fam.all_cycle_vectors_for(params))
            payload["checks"].append(
                _check("cycle_census", True, "%d classes (table comparison needs strict parameters)" % count)
            )
        else:
            payload["checks"].append(
                _check("cycle_census", census.ok, "%d classes" % census.classes)
            )
            code = 0 if census.ok else 1
    elif args.action == "ideal":
        report = fam.telescope_report(params)
        payload["checks"].extend(_report_checks(report))
        code = 0 if report.ok else 1
    elif args.action == "sagbi":
        report = fam.sagbi_certificate(params)
        payload["checks"].extend(_report_checks(report))
        code = 0 if report.ok else 1
    elif args.action == "orbit":
        import random

        rng = random.Random(args.seed)
        ok = True
        for _ in range(args.samples):
            if not fam.verify_orbit_identity(params, fam.sample_domain_point(params, rng)):
                ok = False
                break
        payload["checks"].append(_check("orbit_identity", ok, "%d samples" % args.samples))
        code = 0 if ok else 1
    elif args.action == "rank":
        dim = fam.orbit_dimension(params, seed=args.seed)
        payload["rank"] = dim
        payload["checks"].append(_check("rank", dim == params.t + 5, "rank %d, expected %d"
                                        % (dim, params.t + 5)))
        payload["lines"].append(str(dim))
        code = 0 if dim == params.t + 5 else 1
    else:  # all
        report = fam.family_report(params, seed=args.seed, samples=args.samples)
        payload["checks"].extend(_report_checks(report))
        code = 0 if report.ok else 1
    _emit(payload, args.format)
    return code


def cmd_verify(args) -> int:
    payload = {"command": "verify", "max": args.max, "seed": args.seed, "checks": [], "lines": []}
    code = 0
    tuples = fam.all_params(args.max)
    for params in tuples:
        report = fam.family_report(params, seed=args.seed, samples=args.samples)
        scan = cone_equality_scan(fam.toric_quiver(params), 2)
        ok = report.ok and scan.equal
        detail = ""
        if not report.ok:
            detail = report.first_failure().name
        elif not scan.equal:
            detail = "cone equality: %s" % scan.detail
        payload["checks"].append(_check("tuple %s" % (params.as_tuple(),), ok, detail))
        if not ok:
            code = 1
    payload["lines"].append("%d tuples checked" % len(tuples))
    _emit(payload, args.format)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quivertoric",
        description="Exact toric geometry of thin quiver representations",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("quiver", help="inspect a quiver file")
    q.add_argument("action", choices=("validate", "filters", "cycles", "dot"))
    q.add_argument("file")
    q.set_defaults(func=cmd_quiver)

    c = sub.add_parser("cone", help="cone membership and certificates")
    c.add_argument("action", choices=("member", "decompose", "brute-check"))
    c.add_argument("file")
    c.add_argument("--vector", help="comma-separated integers, one per vertex")
    c.add_argument("--bound", type=int, default=2)
    c.set_defaults(func=cmd_cone)

    f = sub.add_parser("family", help="checks for one parameter tuple")
    f.add_argument("action", choices=("build", "cycles", "ideal", "sagbi", "orbit", "rank", "all"))
    for name in "pqrst":
        f.add_argument("--%s" % name, type=int, required=True)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--samples", type=int, default=100)
    f.set_defaults(func=cmd_family)

    v = sub.add_parser("verify", help="run every certificate over all tuples with t <= max")
    v.add_argument("--max", type=int, default=2)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=100)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "cone" and args.action in ("member", "decompose") and not args.vector:
        print("--vector is required for %s" % args.action, file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except DocumentError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return 2
    except SizeLimitError as exc:
        print("size limit exceeded: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
