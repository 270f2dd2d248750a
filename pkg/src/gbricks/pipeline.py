"""Model decomposition, brick lifting and end-to-end certificates.

The recursion: split a model fan over the star subdivision at a center,
obtain subgroup bricksets (trivial chains for smooth subcones, staircase
enumeration for Hilbert-scheme fans, recursion otherwise), lift everything
through the round-down functions, then search for a stability parameter
theta_P + m*vartheta making every lifted brick stable.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import gcd

from .bricks import (
    GBrick,
    brick_cone_rays,
    check_S_equals_dual,
    lift_brick,
    validate_prebrick,
)
from .cones import (
    classify_cone,
    cone_contains,
    cones_tile,
    discrepancies,
    fan_from_cones,
    is_relatively_nef_K,
    make_cone,
    positive_octant,
    star_subdivide,
    support_monomial,
)
from .lattice import (
    class_point,
    is_good_subdivision,
    is_primitive,
    make_context,
    type_point,
    weight_of,
)
from .linalg import solve3
from .stability import (
    check_vartheta_properties,
    find_m,
    margin_affine,
    normalize_integral,
    solve_partial,
    theta_add,
    theta_plus,
    theta_scale,
    vartheta_catalog,
)


class MorphismError(Exception):
    """The fan does not map to the star subdivision; carries the straddlers."""

    def __init__(self, straddlers):
        self.straddlers = tuple(straddlers)
        super().__init__(
            "no morphism to the star subdivision; straddling cones: %s"
            % (self.straddlers,)
        )


class BuildError(Exception):
    pass


# ---------------------------------------------------------------------------
# coordinate changes along a star subdivision


def _basis_vectors(ctx):
    G = ctx.parent
    basis = []
    for j in range(3):
        if j == ctx.k - 1:
            basis.append(ctx.v)
        else:
            basis.append(tuple(G.r if i == j else 0 for i in range(3)))
    return basis


def subdivision_cone(ctx):
    return make_cone(ctx.parent, _basis_vectors(ctx))


def to_sub_coords(ctx, point):
    """Numerators over a_k of a parent lattice point inside the k-th subcone."""
    basis = _basis_vectors(ctx)
    rows = [tuple(basis[j][i] for j in range(3)) for i in range(3)]
    lam = solve3(rows, point)
    if lam is None:
        raise ValueError("subdivision basis is degenerate")
    nums = []
    for x in lam:
        n = x * ctx.a_k
        if n.denominator != 1:
            raise ValueError(
                "%s/%d is not in the sublattice of axis %d" % (point, ctx.parent.r, ctx.k)
            )
        nums.append(int(n))
    return tuple(nums)


def from_sub_coords(ctx, sub_point):
    """Parent numerators over r of a subgroup lattice point."""
    basis = _basis_vectors(ctx)
    nums = []
    for i in range(3):
        n = Fraction(sum(sub_point[j] * basis[j][i] for j in range(3)), ctx.a_k)
        if n.denominator != 1:
            raise ValueError("subgroup point %s does not map to the parent lattice" % (sub_point,))
        nums.append(int(n))
    return tuple(nums)


@dataclass(frozen=True)
class RestrictedFan:
    """A model fan sliced to one subcone, in subgroup coordinates."""

    ctx: object
    fan: object  # Fan over the subgroup
    parent_cones: tuple  # original ray tuples, aligned with fan.maximal_cones


def restrict_fan(fan, ctx):
    """Slice of the fan inside the k-th subcone, in eigencoordinates."""
    sigma = subdivision_cone(ctx)
    picked = []
    for c in fan.cones():
        if all(cone_contains(sigma, ray) for ray in c.rays):
            picked.append(c.rays)
    if not picked:
        raise ValueError("no maximal cone of the fan lies inside axis %d" % ctx.k)
    sub_lists = [
        tuple(to_sub_coords(ctx, ray) for ray in rays) for rays in picked
    ]
    sub_fan = fan_from_cones(ctx.subgroup, sub_lists)
    # align parent cones with the canonical order of the restricted fan
    order = {}
    for rays, sub_rays in zip(picked, sub_lists):
        key = tuple(sorted(
            to_sub_coords(ctx, ray) for ray in rays
        ))
        order[key] = rays
    parents = []
    for idxs in sub_fan.maximal_cones:
        key = tuple(sorted(sub_fan.rays[i] for i in idxs))
        parents.append(order[key])
    return RestrictedFan(ctx, sub_fan, tuple(parents))


def split_by_star(G, fan, v):
    """Assign every maximal cone to a subcone of the star subdivision at v.

    Raises MorphismError with the straddling cones when some maximal cone is
    in no subcone (the model has no morphism to the subdivided space).
    """
    ctxs = {k: make_context(G, v, k) for k in (1, 2, 3)}
    sigmas = {k: subdivision_cone(ctxs[k]) for k in (1, 2, 3)}
    straddlers = []
    for c in fan.cones():
        if not any(
            all(cone_contains(sigmas[k], ray) for ray in c.rays) for k in (1, 2, 3)
        ):
            straddlers.append(c.rays)
    if straddlers:
        raise MorphismError(straddlers)
    return {k: restrict_fan(fan, ctxs[k]) for k in (1, 2, 3)}


# ---------------------------------------------------------------------------
# base cases: trivial chains and Hilbert-scheme fans


def smooth_cone_brick(ctx):
    """The monomial chain 1, x_k, ..., x_k^(r-1) attached to a smooth subcone."""
    if ctx.a_k != 1:
        raise ValueError("axis %d has subgroup of order %d, not smooth" % (ctx.k, ctx.a_k))
    unit = GBrick(ctx.subgroup, ((0, 0, 0),))
    return lift_brick(ctx, unit)


def _staircases(G):
    """All downward-closed weight transversals of genuine monomials."""
    r = G.r

    def key(m):
        return (sum(m), m)

    results = []

    def grow(members, covered, last):
        if len(members) == r:
            results.append(frozenset(members))
            return
        addable = set()
        for m in members:
            for i in range(3):
                n = tuple(e + (1 if j == i else 0) for j, e in enumerate(m))
                if n in members or n in addable:
                    continue
                divisors_ok = all(
                    tuple(e - (1 if j == i2 else 0) for j, e in enumerate(n)) in members
                    for i2 in range(3)
                    if n[i2] > 0
                )
                if divisors_ok:
                    addable.add(n)
        for n in sorted(addable, key=key):
            if key(n) <= key(last) or weight_of(G, n) in covered:
                continue
            members.add(n)
            covered.add(weight_of(G, n))
            grow(members, covered, n)
            members.discard(n)
            covered.discard(weight_of(G, n))

    grow({(0, 0, 0)}, {0}, (0, 0, 0))
    return results


@dataclass(frozen=True)
class Brickset:
    """One brick per maximal cone of a model fan."""

    group: object
    entries: tuple  # pairs (Cone, GBrick), sorted by cone rays

    def fan(self):
        return fan_from_cones(self.group, [c.rays for c, _ in self.entries])

    def bricks(self):
        return [b for _, b in self.entries]


def make_brickset(G, pairs):
    entries = tuple(sorted(pairs, key=lambda e: e[0].rays))
    cones = [c.rays for c, _ in entries]
    if len(set(cones)) != len(cones):
        raise ValueError("brickset assigns several bricks to one cone")
    return Brickset(G, entries)


@lru_cache(maxsize=None)
def ghilb(G):
    """The Hilbert-scheme fan and brickset by staircase enumeration.

    Enumerates genuine-monomial bricks (downward closed, one monomial per
    weight), keeps those whose ratio cone is full-dimensional, and checks
    that the retained cones tile the octant.
    """
    if G.r > 60:
        raise ValueError("staircase enumeration is limited to group order <= 60")
    octant = positive_octant(G)
    if G.r == 1:
        brick = GBrick(G, ((0, 0, 0),))
        return octant_fan(G), make_brickset(G, [(octant, brick)])
    pairs = []
    for members in _staircases(G):
        report = validate_prebrick(G, sorted(members))
        if not report.valid:
            raise AssertionError("staircase fails prebrick axioms: %s" % (report.violations,))
        bc = brick_cone_rays(report.brick)
        if bc.dim != 3:
            continue
        pairs.append((make_cone(G, bc.rays), report.brick))
    brickset = make_brickset(G, pairs)
    fan = brickset.fan()
    if not cones_tile(fan, octant):
        raise AssertionError(
            "cones of the %s Hilbert-scheme bricks do not tile the octant" % (G,)
        )
    return fan, brickset


def octant_fan(G):
    return fan_from_cones(G, [positive_octant(G).rays])


# ---------------------------------------------------------------------------
# brickset assembly over a star subdivision


@dataclass(frozen=True)
class LevelBuild:
    brickset: object
    per_axis: tuple  # per k: dict with ctx, strategy, restricted, sub_brickset


def _resolve_strategy(strategy, ctx, restricted):
    sub = ctx.subgroup
    if strategy != "auto":
        return strategy
    whole = tuple(sorted(positive_octant(sub).rays))
    if ctx.a_k == 1 and len(restricted.fan.maximal_cones) == 1:
        rays = tuple(sorted(
            restricted.fan.rays[i] for i in restricted.fan.maximal_cones[0]
        ))
        if rays == whole:
            return "trivial"
    if restricted.fan == ghilb(sub)[0]:
        return "ghilb"
    return ("recurse", type_point(sub))


def _sub_brickset(strategy, ctx, restricted):
    sub = ctx.subgroup
    if strategy == "trivial":
        brick = GBrick(sub, ((0, 0, 0),))
        return make_brickset(sub, [(positive_octant(sub), brick)])
    if strategy == "ghilb":
        fan, brickset = ghilb(sub)
        if restricted.fan != fan:
            raise BuildError(
                "restricted fan on axis %d is not the %s Hilbert-scheme fan"
                % (ctx.k, sub)
            )
        return brickset
    if isinstance(strategy, tuple) and strategy[0] == "recurse":
        center = strategy[1]
        return build_brickset(sub, restricted.fan, center, "auto").brickset
    if isinstance(strategy, tuple) and strategy[0] == "load":
        return strategy[1]
    raise ValueError("unknown strategy %r" % (strategy,))


def build_brickset(G, fan, v, strategies="auto"):
    """Lift subgroup bricksets through the star subdivision at v.

    strategies is either "auto" or a dict axis -> strategy, with strategy
    one of "trivial", "ghilb", ("recurse", center) or ("load", brickset).
    The assembled brickset is verified before being returned.
    """
    ok, violations = is_good_subdivision(G, v)
    if not ok:
        raise BuildError("star subdivision at %s/%d is not good: %s" % (v, G.r, violations))
    restricted = split_by_star(G, fan, v)
    per_axis = []
    pairs = []
    for k in (1, 2, 3):
        rest = restricted[k]
        ctx = rest.ctx
        strategy = strategies if strategies == "auto" else strategies.get(k, "auto")
        strategy = _resolve_strategy(strategy, ctx, rest)
        sub_bs = _sub_brickset(strategy, ctx, rest)
        by_cone = {tuple(sorted(c.rays)): b for c, b in sub_bs.entries}
        for idxs, parent_rays in zip(rest.fan.maximal_cones, rest.parent_cones):
            key = tuple(sorted(rest.fan.rays[i] for i in idxs))
            if key not in by_cone:
                raise BuildError(
                    "axis %d brickset has no brick for cone %s" % (k, key)
                )
            lifted = lift_brick(ctx, by_cone[key])
            pairs.append((make_cone(G, parent_rays), lifted))
        per_axis.append(
            {"k": k, "ctx": ctx, "strategy": strategy, "restricted": rest, "sub_brickset": sub_bs}
        )
    if len(pairs) != len(fan.maximal_cones):
        raise BuildError(
            "assembled %d bricks for %d cones" % (len(pairs), len(fan.maximal_cones))
        )
    brickset = make_brickset(G, pairs)
    report = verify_brickset(brickset)
    if not report.ok:
        raise BuildError("assembled brickset fails verification: %s" % (report.failures(),))
    return LevelBuild(brickset, tuple(per_axis))


@dataclass(frozen=True)
class BricksetReport:
    entries: tuple  # per entry: dict with cone, axioms_ok, dual_ok, witness
    tiles: bool

    @property
    def ok(self):
        return self.tiles and all(e["axioms_ok"] and e["dual_ok"] for e in self.entries)

    def failures(self):
        out = [e for e in self.entries if not (e["axioms_ok"] and e["dual_ok"])]
        if not self.tiles:
            out.append({"cone": None, "tiling": False})
        return out


def verify_brickset(brickset):
    """Re-validate every axiom and the dual-semigroup identity per entry."""
    G = brickset.group
    results = []
    for cone, brick in brickset.entries:
        report = validate_prebrick(G, brick.monomials)
        dual_ok, witness = check_S_equals_dual(brick, cone)
        results.append(
            {
                "cone": cone.rays,
                "axioms_ok": report.valid,
                "axiom_violations": report.violations,
                "dual_ok": dual_ok,
                "witness": witness,
            }
        )
    fan = brickset.fan()
    tiles = cones_tile(fan, positive_octant(G))
    return BricksetReport(tuple(results), tiles)


# ---------------------------------------------------------------------------
# families and model fans


@dataclass(frozen=True)
class FamilyTag:
    variant: str  # case1 | case2a | case2b
    a: int
    b: int
    c: int
    k: object  # int for case2, None for case1
    axes: tuple  # coordinate positions of the weights (1, a, b)

    def family_key(self):
        if self.variant == "case1":
            return ("case1", self.a, self.b, self.c)
        if self.variant == "case2a":
            return ("case2a", self.a, self.b, self.c, self.k)
        return ("case2b", self.a, self.b, self.k)


def detect_family(G):
    """All family tags matching the group's weights up to coordinate order."""
    w = G.weights
    r = G.r
    tags = []
    for axes in permutations(range(3)):
        i, j, l = axes
        if w[i] != 1:
            continue
        a, b = w[j], w[l]
        if a >= 1 and b >= 1 and gcd(a, b) == 1:
            num = r - a - b - 1
            if num > 0 and num % (a * b) == 0:
                tags.append(FamilyTag("case1", a, b, num // (a * b), None, axes))
        if a >= 2 and b % a == 1 and b > a:
            k = (b - 1) // a
            num = r - a + 2 * b - 1
            if num > 0 and num % (a * b) == 0:
                c = num // (a * b)
                variant = "case2a" if c >= 2 else "case2b"
                tags.append(FamilyTag(variant, a, b, c, k, axes))
    seen = set()
    unique = []
    for tag in sorted(tags, key=lambda t: (t.variant, t.a, t.b)):
        key = tag.family_key()
        if key not in seen:
            seen.add(key)
            unique.append(tag)
    return unique


def second_center(G, tag):
    """The auxiliary subdivision center w = ((r+1)/a, 1, (r+b)/a)/r of case 2."""
    r = G.r
    a, b = tag.a, tag.b
    if (r + 1) % a or (r + b) % a:
        raise ValueError("family %s does not admit the auxiliary center" % (tag,))
    i, j, l = tag.axes
    w = [0, 0, 0]
    w[i] = (r + 1) // a
    w[j] = 1
    w[l] = (r + b) // a
    return tuple(w)


def canonical_model_fan(G, tag):
    """Regenerate the canonical-model fan of a detected family.

    case1: the star subdivision at the type point.  case2: subdivide again
    at the auxiliary center inside the 1/a(1,1,1) subcone; for c = 1 the two
    cones flanking it flatten into one non-simplicial 4-ray cone.
    """
    v = type_point(G)
    fan = star_subdivide(positive_octant(G), v)
    if tag.variant == "case1":
        return fan
    w = second_center(G, tag)
    fan = star_subdivide(fan, w)
    if tag.variant == "case2a":
        return fan
    # c = 1: merge the two cones through the plane spanned by e_i, e_j, v, w
    i, j, _ = tag.axes
    e_i = tuple(G.r if p == i else 0 for p in range(3))
    e_j = tuple(G.r if p == j else 0 for p in range(3))
    first = tuple(sorted((e_i, e_j, v)))
    second = tuple(sorted((e_i, v, w)))
    cones = []
    merged = False
    for c in fan.cones():
        if c.rays in (first, second):
            if not merged:
                cones.append(tuple(sorted((e_i, e_j, v, w))))
                merged = True
            continue
        cones.append(c.rays)
    out = fan_from_cones(G, cones)
    quad = make_cone(G, (e_i, e_j, v, w))
    if support_monomial(quad) is None:
        raise ValueError("case2b merge is not planar for %s" % (tag,))
    return out


def star_sequence_fan(G, centers):
    """Iterated star subdivisions of the octant, in the given order."""
    fan = octant_fan(G)
    for v in centers:
        fan = star_subdivide(fan, v)
    return fan


def hilbertized_model(G, v):
    """Star subdivision at v with each subcone refined by its Hilbert fan."""
    ctxs = {k: make_context(G, v, k) for k in (1, 2, 3)}
    cones = []
    for k in (1, 2, 3):
        ctx = ctxs[k]
        sub_fan, _ = ghilb(ctx.subgroup)
        for c in sub_fan.cones():
            cones.append(tuple(from_sub_coords(ctx, ray) for ray in c.rays))
    return fan_from_cones(G, cones)


@dataclass(frozen=True)
class ModelReport:
    simplicial: bool
    classifications: tuple  # per cone: (rays, kind, gorenstein)
    all_smooth: bool
    all_terminal: bool
    nef: object
    discrepancy: tuple  # pairs (ray, value)


def certify_model(G, fan):
    """Q-factoriality, Reid classification, K-nefness and discrepancies."""
    classifications = []
    simplicial = True
    for c in fan.cones():
        if not c.simplicial:
            simplicial = False
            classifications.append((c.rays, "not-simplicial", False))
            continue
        cc = classify_cone(G, c)
        classifications.append((c.rays, cc.kind, cc.gorenstein))
    kinds = [k for _, k, _ in classifications]
    nef = is_relatively_nef_K(G, fan)
    disc = tuple(sorted(discrepancies(G, fan).items()))
    return ModelReport(
        simplicial=simplicial,
        classifications=tuple(classifications),
        all_smooth=all(k == "smooth" for k in kinds),
        all_terminal=all(k in ("smooth", "terminal") for k in kinds),
        nef=nef,
        discrepancy=disc,
    )


# ---------------------------------------------------------------------------
# end-to-end certificates


@dataclass(frozen=True)
class StabilityCertificate:
    group: object
    brickset: object
    theta_p: object
    vartheta: object
    m: int
    margins: tuple  # per entry: dict cone, value, witness, affine
    center: tuple
    log: tuple


@dataclass(frozen=True)
class EndToEndFailure:
    stage: str
    message: str
    details: dict
    log: tuple

    def __bool__(self):
        return False


def _choose_center(G, fan, log):
    v = type_point(G)
    ok, violations = is_good_subdivision(G, v)
    if ok:
        try:
            split_by_star(G, fan, v)
            return v
        except MorphismError as err:
            log.append("no morphism to the subdivision at %s/%d: %s" % (v, G.r, err.straddlers))
    else:
        log.append("type point %s/%d is not a good center: %s" % (v, G.r, violations))
    for t in range(2, G.r):
        p = class_point(G, t)
        if p == v or not is_primitive(G, p):
            continue
        ok, _ = is_good_subdivision(G, p)
        if not ok:
            continue
        try:
            split_by_star(G, fan, p)
        except MorphismError:
            continue
        log.append("fallback center %s/%d (class %d)" % (p, G.r, t))
        return p
    return None


def _axis_target(G, fan, axis_info, log):
    """A stabilizing parameter for one axis, recursing when needed."""
    strategy = axis_info["strategy"]
    ctx = axis_info["ctx"]
    sub = ctx.subgroup
    if strategy == "trivial":
        return None
    if strategy == "ghilb":
        return theta_plus(sub)
    sub_result = end_to_end(sub, axis_info["restricted"].fan)
    if isinstance(sub_result, EndToEndFailure):
        log.append("axis %d subcertificate failed at %s" % (ctx.k, sub_result.stage))
        return sub_result
    composite = theta_add(
        sub_result.theta_p, theta_scale(sub_result.m, sub_result.vartheta)
    )
    return normalize_integral(composite)


def end_to_end(G, fan):
    """Full pipeline: family detection, brickset, parameter search.

    Returns a StabilityCertificate, or a structured EndToEndFailure naming
    the stage that could not be completed.
    """
    log = []
    tags = detect_family(G)
    if not tags:
        return EndToEndFailure(
            "family", "group %s matches no covered family" % (G,), {}, tuple(log)
        )
    log.append("family tags: %s" % ([t.family_key() for t in tags],))
    center = _choose_center(G, fan, log)
    if center is None:
        return EndToEndFailure(
            "center",
            "no good subdivision center admits a morphism from the fan",
            {},
            tuple(log),
        )
    try:
        build = build_brickset(G, fan, center, "auto")
    except (BuildError, MorphismError, RuntimeError) as err:
        return EndToEndFailure("brickset", str(err), {}, tuple(log))
    log.append(
        "brickset over center %s/%d with strategies %s"
        % (center, G.r, [(ax["k"], ax["strategy"]) for ax in build.per_axis])
    )
    ctxs_all = [ax["ctx"] for ax in build.per_axis]
    ctxs = []
    targets = []
    for ax in build.per_axis:
        if ax["ctx"].a_k == 1:
            continue
        target = _axis_target(G, fan, ax, log)
        if isinstance(target, EndToEndFailure):
            rank, dim = pushforward_rank_all(G, build)
            return EndToEndFailure(
                "solve_partial",
                "no stabilizing target available for axis %d (%s)"
                % (ax["k"], ax["ctx"].subgroup),
                {"rank": rank, "target_dim": dim, "surjective": rank == dim},
                tuple(log),
            )
        ctxs.append(ax["ctx"])
        targets.append(target.values)
    solved = solve_partial(G, ctxs, targets)
    if not solved.solved:
        return EndToEndFailure(
            "solve_partial",
            "pushforward system is inconsistent for the axis targets",
            {
                "rank": solved.rank,
                "target_dim": solved.target_dim,
                "surjective": solved.surjective,
            },
            tuple(log),
        )
    log.append(
        "theta_P solved (rank %d of %d%s)"
        % (solved.rank, solved.target_dim, "" if solved.surjective else ", not surjective")
    )
    vt = None
    for tag in tags:
        try:
            candidate = vartheta_catalog(G, tag.family_key())
        except ValueError as err:
            log.append("vartheta %s rejected: %s" % (tag.family_key(), err))
            continue
        props = check_vartheta_properties(ctxs_all, candidate)
        if props.all_ok:
            vt = candidate
            log.append("vartheta from %s" % (tag.family_key(),))
            break
        log.append("vartheta %s fails properties: %s" % (tag.family_key(), props.witnesses[:3]))
    if vt is None:
        return EndToEndFailure(
            "vartheta",
            "no catalog direction parameter passes the fiber properties",
            {},
            tuple(log),
        )
    bricks = build.brickset.bricks()
    result = find_m(bricks, solved.theta, vt)
    if not result.found:
        return EndToEndFailure(
            "find_m",
            "no multiplier up to the search bound stabilizes every brick",
            {"worst": result.worst},
            tuple(log),
        )
    margins = []
    for (cone, brick), margin in zip(build.brickset.entries, result.margins):
        margins.append(
            {
                "cone": cone.rays,
                "value": margin.value,
                "witness": margin.witness,
                "affine": margin_affine(brick, solved.theta, vt, margin.witness),
            }
        )
    log.append("stabilizing multiplier m = %d" % result.m)
    return StabilityCertificate(
        group=G,
        brickset=build.brickset,
        theta_p=solved.theta,
        vartheta=vt,
        m=result.m,
        margins=tuple(margins),
        center=center,
        log=tuple(log),
    )


def pushforward_rank_all(G, build):
    from .stability import pushforward_rank

    ctxs = [ax["ctx"] for ax in build.per_axis if ax["ctx"].a_k > 1]
    return pushforward_rank(G, ctxs)
