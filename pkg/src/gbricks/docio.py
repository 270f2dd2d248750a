"""Strict, canonical JSON documents for groups, fans, bricks and parameters.

Every document round-trips bit-exactly: rationals are serialized in lowest
terms, weights ascend, rays sort lexicographically by numerator triple, and
unknown fields are rejected.
"""

import json
import re
from fractions import Fraction

from .bricks import GBrick
from .cones import fan_from_cones, make_cone
from .lattice import group_from_type, make_context
from .pipeline import StabilityCertificate, make_brickset
from .stability import Affine, Theta

FORMAT_VERSION = "1"


class ParseError(ValueError):
    """Malformed document, with position information when available."""


def _fail(path, message):
    raise ParseError("%s: %s" % (path, message))


def _expect_keys(obj, path, required, optional=()):
    if not isinstance(obj, dict):
        _fail(path, "expected an object, got %s" % type(obj).__name__)
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        _fail(path, "unknown fields %s" % sorted(unknown))
    missing = set(required) - set(obj)
    if missing:
        _fail(path, "missing fields %s" % sorted(missing))


def _int(x, path):
    if not isinstance(x, int) or isinstance(x, bool):
        _fail(path, "expected an integer, got %r" % (x,))
    return x


def _rat(x, path):
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            _fail(path, "not a rational: %r" % (x,))
    _fail(path, "rationals are serialized as strings, got %r" % (x,))


def _rat_str(x):
    return str(Fraction(x))


def _triple(x, path):
    if not isinstance(x, list) or len(x) != 3:
        _fail(path, "expected a triple, got %r" % (x,))
    return tuple(_int(v, "%s[%d]" % (path, i)) for i, v in enumerate(x))


# ---------------------------------------------------------------------------
# payload encoders


def _group_payload(G):
    return {"r": G.r, "weights": list(G.weights)}


def _group_from(obj, path):
    _expect_keys(obj, path, ("r", "weights"))
    r = _int(obj["r"], path + ".r")
    weights = _triple(obj["weights"], path + ".weights")
    try:
        return group_from_type(r, weights)
    except ValueError as err:
        _fail(path, str(err))


def _fan_payload(fan):
    return {
        "group": _group_payload(fan.group),
        "rays": [list(ray) for ray in fan.rays],
        "maximal_cones": [list(c) for c in fan.maximal_cones],
    }


def _fan_from(obj, path):
    _expect_keys(obj, path, ("group", "rays", "maximal_cones"))
    G = _group_from(obj["group"], path + ".group")
    rays = [
        _triple(ray, "%s.rays[%d]" % (path, i)) for i, ray in enumerate(obj["rays"])
    ]
    cone_lists = []
    for i, idxs in enumerate(obj["maximal_cones"]):
        if not isinstance(idxs, list):
            _fail("%s.maximal_cones[%d]" % (path, i), "expected a list")
        try:
            cone_lists.append([rays[_int(j, path)] for j in idxs])
        except IndexError:
            _fail("%s.maximal_cones[%d]" % (path, i), "ray index out of range")
    try:
        return fan_from_cones(G, cone_lists)
    except ValueError as err:
        _fail(path, str(err))


def _brick_payload(brick, ctx=None):
    payload = {
        "group": _group_payload(brick.group),
        "monomials": [list(m) for m in brick.monomials],
    }
    if ctx is not None:
        payload["context"] = {
            "parent": _group_payload(ctx.parent),
            "center": list(ctx.v),
            "axis": ctx.k,
        }
    return payload


def _brick_from(obj, path):
    _expect_keys(obj, path, ("group", "monomials"), optional=("context",))
    G = _group_from(obj["group"], path + ".group")
    monos = [
        _triple(m, "%s.monomials[%d]" % (path, i))
        for i, m in enumerate(obj["monomials"])
    ]
    if len(monos) != G.r:
        _fail(path + ".monomials", "expected %d monomials, got %d" % (G.r, len(monos)))
    brick = GBrick(G, tuple(monos))
    ctx = None
    if "context" in obj:
        cobj = obj["context"]
        _expect_keys(cobj, path + ".context", ("parent", "center", "axis"))
        parent = _group_from(cobj["parent"], path + ".context.parent")
        center = _triple(cobj["center"], path + ".context.center")
        axis = _int(cobj["axis"], path + ".context.axis")
        try:
            ctx = make_context(parent, center, axis)
        except ValueError as err:
            _fail(path + ".context", str(err))
        if ctx.subgroup != G:
            _fail(path + ".context", "context subgroup %s does not match %s" % (ctx.subgroup, G))
    return brick, ctx


def _theta_value_payload(x):
    if isinstance(x, Affine):
        return {"const": _rat_str(x.const), "slope": _rat_str(x.slope)}
    return _rat_str(x)


def _theta_value_from(x, path):
    if isinstance(x, dict):
        _expect_keys(x, path, ("const", "slope"))
        return Affine(_rat(x["const"], path + ".const"), _rat(x["slope"], path + ".slope"))
    return _rat(x, path)


def _theta_payload(theta):
    return {"r": len(theta), "values": [_theta_value_payload(x) for x in theta.values]}


def _theta_from(obj, path):
    _expect_keys(obj, path, ("r", "values"))
    r = _int(obj["r"], path + ".r")
    if not isinstance(obj["values"], list) or len(obj["values"]) != r:
        _fail(path + ".values", "expected %d values" % r)
    values = tuple(
        _theta_value_from(x, "%s.values[%d]" % (path, i))
        for i, x in enumerate(obj["values"])
    )
    try:
        return Theta(values)
    except ValueError as err:
        _fail(path, str(err))


def _brickset_payload(bs):
    return {
        "group": _group_payload(bs.group),
        "entries": [
            {"cone": [list(ray) for ray in cone.rays], "brick": [list(m) for m in brick.monomials]}
            for cone, brick in bs.entries
        ],
    }


def _brickset_from(obj, path):
    _expect_keys(obj, path, ("group", "entries"))
    G = _group_from(obj["group"], path + ".group")
    pairs = []
    for i, entry in enumerate(obj["entries"]):
        epath = "%s.entries[%d]" % (path, i)
        _expect_keys(entry, epath, ("cone", "brick"))
        rays = [
            _triple(ray, "%s.cone[%d]" % (epath, j)) for j, ray in enumerate(entry["cone"])
        ]
        monos = [
            _triple(m, "%s.brick[%d]" % (epath, j)) for j, m in enumerate(entry["brick"])
        ]
        if len(monos) != G.r:
            _fail(epath + ".brick", "expected %d monomials" % G.r)
        try:
            pairs.append((make_cone(G, rays), GBrick(G, tuple(monos))))
        except ValueError as err:
            _fail(epath, str(err))
    try:
        return make_brickset(G, pairs)
    except ValueError as err:
        _fail(path, str(err))


def _certificate_payload(cert):
    return {
        "group": _group_payload(cert.group),
        "center": list(cert.center),
        "brickset": _brickset_payload(cert.brickset),
        "theta_p": _theta_payload(cert.theta_p),
        "vartheta": _theta_payload(cert.vartheta),
        "m": cert.m,
        "margins": [
            {
                "cone": [list(ray) for ray in margin["cone"]],
                "value": _rat_str(margin["value"]),
                "witness": sorted(margin["witness"]),
                "affine": _theta_value_payload(margin["affine"]),
            }
            for margin in cert.margins
        ],
    }


def _certificate_from(obj, path):
    _expect_keys(
        obj,
        path,
        ("group", "center", "brickset", "theta_p", "vartheta", "m", "margins"),
    )
    G = _group_from(obj["group"], path + ".group")
    bs = _brickset_from(obj["brickset"], path + ".brickset")
    margins = []
    for i, m in enumerate(obj["margins"]):
        mpath = "%s.margins[%d]" % (path, i)
        _expect_keys(m, mpath, ("cone", "value", "witness", "affine"))
        margins.append(
            {
                "cone": tuple(_triple(ray, mpath) for ray in m["cone"]),
                "value": _rat(m["value"], mpath + ".value"),
                "witness": frozenset(_int(w, mpath) for w in m["witness"]),
                "affine": _theta_value_from(m["affine"], mpath + ".affine"),
            }
        )
    return StabilityCertificate(
        group=G,
        brickset=bs,
        theta_p=_theta_from(obj["theta_p"], path + ".theta_p"),
        vartheta=_theta_from(obj["vartheta"], path + ".vartheta"),
        m=_int(obj["m"], path + ".m"),
        margins=tuple(margins),
        center=_triple(obj["center"], path + ".center"),
        log=(),
    )


# ---------------------------------------------------------------------------
# public surface

_KINDS = ("group", "fan", "brick", "brickset", "theta", "certificate", "report")


def serialize(kind, value, context=None):
    """Canonical UTF-8 text of a document of the given kind."""
    if kind == "group":
        payload = _group_payload(value)
    elif kind == "fan":
        payload = _fan_payload(value)
    elif kind == "brick":
        payload = _brick_payload(value, context)
    elif kind == "brickset":
        payload = _brickset_payload(value)
    elif kind == "theta":
        payload = _theta_payload(value)
    elif kind == "certificate":
        payload = _certificate_payload(value)
    elif kind == "report":
        payload = {"payload": value}
    else:
        raise ValueError("unknown document kind %r" % (kind,))
    doc = {"kind": kind, "version": FORMAT_VERSION}
    doc.update(payload)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def parse(text):
    """Parse a document; returns (kind, value) with strict field checking.

    Bricks parse to (brick, context-or-None).
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(
            "line %d column %d: %s" % (err.lineno, err.colno, err.msg)
        ) from None
    if not isinstance(obj, dict):
        raise ParseError("$: top level must be an object")
    kind = obj.get("kind")
    if kind not in _KINDS:
        _fail("$.kind", "unknown document kind %r" % (kind,))
    if obj.get("version") != FORMAT_VERSION:
        _fail("$.version", "unsupported version %r" % (obj.get("version"),))
    body = {k: v for k, v in obj.items() if k not in ("kind", "version")}
    if kind == "group":
        return kind, _group_from(body, "$")
    if kind == "fan":
        return kind, _fan_from(body, "$")
    if kind == "brick":
        return kind, _brick_from(body, "$")
    if kind == "brickset":
        return kind, _brickset_from(body, "$")
    if kind == "theta":
        return kind, _theta_from(body, "$")
    if kind == "certificate":
        return kind, _certificate_from(body, "$")
    _expect_keys(body, "$", ("payload",))
    return kind, body["payload"]


_TYPE_RE = re.compile(r"^\s*1/(\d+)\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$")


def parse_group_type(text):
    """Parse a type string like 1/20(1,3,4)."""
    m = _TYPE_RE.match(text)
    if not m:
        raise ParseError("not a group type: %r (expected 1/r(a1,a2,a3))" % (text,))
    r, a1, a2, a3 = map(int, m.groups())
    return group_from_type(r, (a1, a2, a3))
