"""Command line surface.

Exit codes: 0 success, 2 validation failure, 3 structured mathematical
failure (infeasible solve, unstable certificate search), 4 parse error.
Failures always print a machine-readable report document.
"""

import argparse
import sys
from fractions import Fraction

from .cones import classify_cone, discrepancies, positive_octant, star_subdivide
from .docio import ParseError, parse, parse_group_type, serialize
from .lattice import age, class_point, is_good_subdivision, make_context
from .pipeline import (
    BuildError,
    EndToEndFailure,
    MorphismError,
    build_brickset,
    certify_model,
    end_to_end,
    ghilb,
    verify_brickset,
)
from .render import render_fan_svg
from .stability import min_margin, min_margin_symbolic, solve_partial


class CliError(Exception):
    def __init__(self, code, payload):
        self.code = code
        self.payload = payload
        super().__init__(str(payload))


def _emit(kind, value, context=None):
    sys.stdout.write(serialize(kind, value, context))


def _load(path, expected_kind):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            kind, value = parse(fh.read())
    except OSError as err:
        raise CliError(2, {"error": str(err)})
    except ParseError as err:
        raise CliError(4, {"error": str(err)})
    if kind != expected_kind:
        raise CliError(4, {"error": "expected a %s document, got %s" % (expected_kind, kind)})
    return value


def _group(text):
    try:
        return parse_group_type(text)
    except ParseError as err:
        raise CliError(4, {"error": str(err)})
    except ValueError as err:
        raise CliError(2, {"error": str(err)})


def _point(text):
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise CliError(4, {"error": "expected n1,n2,n3 integers, got %r" % text})
    if len(parts) != 3:
        raise CliError(4, {"error": "expected three numerators, got %r" % text})
    return parts


def cmd_group_info(args):
    G = _group(args.type)
    juniors = []
    for t in range(1, G.r):
        p = class_point(G, t)
        if age(G, p) == 1:
            juniors.append({"class": t, "numerators": list(p)})
    _emit(
        "report",
        {
            "order": G.r,
            "weights": list(G.weights),
            "variable_weights": [
                {"variable": "x%d" % (i + 1), "weight": G.weights[i]} for i in range(3)
            ],
            "junior_points": juniors,
        },
    )
    return 0


def cmd_subdivide(args):
    G = _group(args.type)
    v = _point(args.at)
    good, violations = is_good_subdivision(G, v)
    fan = star_subdivide(positive_octant(G), v)
    subcones = []
    if all(n >= 1 for n in v):
        for k in (1, 2, 3):
            ctx = make_context(G, v, k)
            subcones.append(
                {
                    "axis": k,
                    "order": ctx.subgroup.r,
                    "weights": list(ctx.subgroup.weights),
                    "smooth": ctx.subgroup.r == 1,
                }
            )
    classifications = []
    for c in fan.cones():
        cc = classify_cone(G, c)
        classifications.append(
            {
                "cone": [list(ray) for ray in c.rays],
                "kind": cc.kind,
                "gorenstein": cc.gorenstein,
            }
        )
    disc = [
        {"ray": list(ray), "discrepancy": str(val)}
        for ray, val in sorted(discrepancies(G, fan).items())
    ]
    import json

    _emit(
        "report",
        {
            "fan": json.loads(serialize("fan", fan)),
            "good": good,
            "violations": violations,
            "subcones": subcones,
            "classification": classifications,
            "discrepancies": disc,
        },
    )
    return 0


def cmd_fan_check(args):
    fan = _load(args.fan, "fan")
    report = certify_model(fan.group, fan)
    _emit(
        "report",
        {
            "simplicial": report.simplicial,
            "all_smooth": report.all_smooth,
            "all_terminal": report.all_terminal,
            "canonical_nef": report.nef.nef,
            "nef_witness": None
            if report.nef.witness is None
            else [list(map(list, report.nef.witness[0])), list(report.nef.witness[1])],
            "classification": [
                {"cone": [list(r) for r in rays], "kind": kind, "gorenstein": gor}
                for rays, kind, gor in report.classifications
            ],
            "discrepancies": [
                {"ray": list(ray), "discrepancy": str(val)} for ray, val in report.discrepancy
            ],
        },
    )
    return 0


def cmd_hilb(args):
    G = _group(args.type)
    fan, brickset = ghilb(G)
    if args.out_prefix:
        with open(args.out_prefix + ".fan.json", "w", encoding="utf-8") as fh:
            fh.write(serialize("fan", fan))
        with open(args.out_prefix + ".brickset.json", "w", encoding="utf-8") as fh:
            fh.write(serialize("brickset", brickset))
        return 0
    _emit("brickset", brickset)
    return 0


def _parse_strategy(specs):
    if not specs:
        return "auto"
    strategies = {}
    for spec in specs:
        try:
            axis, name = spec.split("=", 1)
            axis = int(axis)
        except ValueError:
            raise CliError(4, {"error": "strategy must look like k=ghilb, got %r" % spec})
        if name in ("auto", "trivial", "ghilb"):
            strategies[axis] = name
        elif name.startswith("recurse:"):
            strategies[axis] = ("recurse", _point(name.split(":", 1)[1]))
        else:
            raise CliError(4, {"error": "unknown strategy %r" % name})
    return strategies


def cmd_brickset_build(args):
    G = _group(args.type)
    fan = _load(args.fan, "fan")
    if fan.group != G:
        raise CliError(2, {"error": "fan group %s does not match %s" % (fan.group, G)})
    try:
        build = build_brickset(G, fan, _point(args.center), _parse_strategy(args.strategy))
    except (BuildError, MorphismError, RuntimeError, ValueError) as err:
        raise CliError(3, {"error": str(err)})
    _emit("brickset", build.brickset)
    return 0


def cmd_brickset_verify(args):
    brickset = _load(args.brickset, "brickset")
    report = verify_brickset(brickset)
    _emit(
        "report",
        {
            "ok": report.ok,
            "tiles": report.tiles,
            "entries": [
                {
                    "cone": [list(r) for r in e["cone"]],
                    "axioms_ok": e["axioms_ok"],
                    "dual_ok": e["dual_ok"],
                }
                for e in report.entries
            ],
        },
    )
    return 0 if report.ok else 3


def cmd_theta_solve(args):
    G = _group(args.type)
    v = _point(args.center) if args.center else class_point(G, 1)
    ctxs, targets = [], []
    for spec in args.target or []:
        try:
            axis, values = spec.split("=", 1)
            axis = int(axis)
            target = [Fraction(x) for x in values.split(",")]
        except (ValueError, ZeroDivisionError):
            raise CliError(4, {"error": "target must look like k=v1,v2,..., got %r" % spec})
        ctxs.append(make_context(G, v, axis))
        targets.append(target)
    try:
        result = solve_partial(G, ctxs, targets)
    except ValueError as err:
        raise CliError(2, {"error": str(err)})
    if not result.solved:
        raise CliError(
            3,
            {
                "error": "pushforward system is inconsistent",
                "rank": result.rank,
                "target_dim": result.target_dim,
                "surjective": result.surjective,
            },
        )
    _emit("theta", result.theta)
    return 0


def cmd_stability_check(args):
    brick, _ctx = _load(args.brick, "brick")
    theta = _load(args.theta, "theta")
    if len(theta) != brick.group.r:
        raise CliError(2, {"error": "parameter length %d does not match order %d" % (len(theta), brick.group.r)})
    if args.symbolic_m:
        affine, witness = min_margin_symbolic(brick, theta)
        payload = {
            "margin": None
            if affine is None
            else {"const": str(affine.const), "slope": str(affine.slope)},
            "witness": None if witness is None else sorted(witness),
        }
        stable = affine is not None and (affine.slope > 0 or (affine.slope == 0 and affine.const > 0))
    else:
        if theta.symbolic:
            raise CliError(2, {"error": "parameter is symbolic; pass --symbolic-m"})
        margin = min_margin(brick, theta)
        payload = {
            "margin": None if margin.value is None else str(margin.value),
            "witness": None if margin.witness is None else sorted(margin.witness),
        }
        stable = margin.stable
    payload["stable"] = stable
    _emit("report", payload)
    return 0


def cmd_certify(args):
    G = _group(args.type)
    fan = _load(args.fan, "fan")
    if fan.group != G:
        raise CliError(2, {"error": "fan group %s does not match %s" % (fan.group, G)})
    result = end_to_end(G, fan)
    if isinstance(result, EndToEndFailure):
        raise CliError(
            3,
            {
                "error": result.message,
                "stage": result.stage,
                "details": {k: str(v) for k, v in result.details.items()},
                "log": list(result.log),
            },
        )
    _emit("certificate", result)
    return 0


def cmd_render(args):
    fan = _load(args.fan, "fan")
    svg = render_fan_svg(fan)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gbricks",
        description="Exact toric models of cyclic quotient singularities and their stability certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    group = sub.add_parser("group", help="group information")
    group_sub = group.add_subparsers(dest="subcommand", required=True)
    info = group_sub.add_parser("info", help="order, weight table, junior points")
    info.add_argument("type")
    info.set_defaults(func=cmd_group_info)

    subdiv = sub.add_parser("subdivide", help="star subdivision report")
    subdiv.add_argument("type")
    subdiv.add_argument("--at", required=True, help="center numerators n1,n2,n3")
    subdiv.set_defaults(func=cmd_subdivide)

    fan = sub.add_parser("fan", help="fan operations")
    fan_sub = fan.add_subparsers(dest="subcommand", required=True)
    check = fan_sub.add_parser("check", help="model certification report")
    check.add_argument("fan")
    check.set_defaults(func=cmd_fan_check)

    hilb = sub.add_parser("hilb", help="Hilbert-scheme fan and brickset")
    hilb.add_argument("type")
    hilb.add_argument("-o", dest="out_prefix", help="write PREFIX.fan.json and PREFIX.brickset.json")
    hilb.set_defaults(func=cmd_hilb)

    brickset = sub.add_parser("brickset", help="brickset operations")
    bs_sub = brickset.add_subparsers(dest="subcommand", required=True)
    build = bs_sub.add_parser("build", help="lift subgroup bricksets over a subdivision")
    build.add_argument("type")
    build.add_argument("fan")
    build.add_argument("--center", required=True)
    build.add_argument("--strategy", action="append", help="k=trivial|ghilb|recurse:n1,n2,n3")
    build.set_defaults(func=cmd_brickset_build)
    verify = bs_sub.add_parser("verify", help="re-validate a brickset document")
    verify.add_argument("brickset")
    verify.set_defaults(func=cmd_brickset_verify)

    theta = sub.add_parser("theta", help="stability parameter operations")
    theta_sub = theta.add_subparsers(dest="subcommand", required=True)
    solve = theta_sub.add_parser("solve", help="solve the pushforward system")
    solve.add_argument("type")
    solve.add_argument("--center", help="subdivision center, default the type point")
    solve.add_argument("--target", action="append", help="k=v1,v2,... per axis")
    solve.set_defaults(func=cmd_theta_solve)

    stab = sub.add_parser("stability", help="stability checks")
    stab_sub = stab.add_subparsers(dest="subcommand", required=True)
    scheck = stab_sub.add_parser("check", help="minimum margin of a brick")
    scheck.add_argument("brick")
    scheck.add_argument("theta")
    scheck.add_argument("--symbolic-m", action="store_true")
    scheck.set_defaults(func=cmd_stability_check)

    certify = sub.add_parser("certify", help="end-to-end stability certificate")
    certify.add_argument("type")
    certify.add_argument("fan")
    certify.set_defaults(func=cmd_certify)

    render = sub.add_parser("render", help="SVG triangulation")
    render.add_argument("fan")
    render.add_argument("-o", dest="output", required=True)
    render.set_defaults(func=cmd_render)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as err:
        sys.stdout.write(serialize("report", err.payload))
        return err.code
    except ParseError as err:
        sys.stdout.write(serialize("report", {"error": str(err)}))
        return 4
    except ValueError as err:
        sys.stdout.write(serialize("report", {"error": str(err)}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
