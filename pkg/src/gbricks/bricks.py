"""G-bricks: weight transversals of Laurent monomials and their toric data.

A brick stores one monomial per character, indexed by weight.  From it we
derive the semigroup of invariant ratios, its dual cone, border monomials,
and the closure combinatorics of submodules.
"""

from dataclasses import dataclass
from itertools import product as iter_product

from .cones import dual_generators, hilbert_basis, make_cone
from .lattice import (
    fiber_in,
    is_genuine,
    monomial_div,
    monomial_mul,
    primitivize,
    round_down,
    weight_of,
)
from .linalg import cross, dot, matrix_rank


@dataclass(frozen=True)
class GBrick:
    """A transversal of r Laurent monomials; entry i has weight i."""

    group: object
    monomials: tuple

    def __len__(self):
        return len(self.monomials)

    def members(self):
        return frozenset(self.monomials)

    def entry(self, weight):
        return self.monomials[weight % self.group.r]


@dataclass(frozen=True)
class PrebrickReport:
    brick: object  # GBrick or None
    violations: tuple

    @property
    def valid(self):
        return not self.violations


AXIS = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def validate_prebrick(G, candidate):
    """Check the four prebrick axioms, reporting every violation with a witness.

    Axioms: the monomial 1 belongs to the set; weights are a bijection onto
    the characters; saturation (divisor chains between members stay inside);
    connectedness under single-variable multiplication or division.
    """
    monos = [tuple(int(e) for e in m) for m in candidate]
    members = set(monos)
    violations = []
    if len(members) != len(monos):
        dups = sorted({m for m in members if monos.count(m) > 1})
        violations.append(("ii", "duplicate monomials %s" % (dups,)))
    if (0, 0, 0) not in members:
        violations.append(("i", "the monomial 1 is missing"))
    by_weight = {}
    for m in sorted(members):
        w = weight_of(G, m)
        if w in by_weight:
            violations.append(
                ("ii", "weight %d carried by both %s and %s" % (w, by_weight[w], m))
            )
        else:
            by_weight[w] = m
    missing = [w for w in range(G.r) if w not in by_weight]
    if missing:
        violations.append(("ii", "weights %s are not represented" % (missing,)))
    for m in sorted(members):
        for m2 in sorted(members):
            d = monomial_div(m2, m)
            if m2 == m or not is_genuine(d):
                continue
            for n in iter_product(*(range(e + 1) for e in d)):
                mid = monomial_mul(m, n)
                if mid not in members:
                    violations.append(
                        (
                            "iii",
                            "%s and %s = %s * %s are in the set but %s is not"
                            % (m, m2, n, m, mid),
                        )
                    )
                    break
            else:
                continue
            break
    if (0, 0, 0) in members:
        seen = {(0, 0, 0)}
        frontier = [(0, 0, 0)]
        while frontier:
            cur = frontier.pop()
            for step in AXIS:
                for nxt in (monomial_mul(cur, step), monomial_div(cur, step)):
                    if nxt in members and nxt not in seen:
                        seen.add(nxt)
                        frontier.append(nxt)
        stranded = sorted(members - seen)
        if stranded:
            violations.append(("iv", "no path from 1 to %s" % (stranded,)))
    if violations:
        return PrebrickReport(None, tuple(violations))
    brick = GBrick(G, tuple(by_weight[w] for w in range(G.r)))
    return PrebrickReport(brick, ())


def as_prebrick(G, candidate):
    report = validate_prebrick(G, candidate)
    if not report.valid:
        raise ValueError("invalid prebrick: %s" % (report.violations,))
    return report.brick


def wt_brick(brick, m):
    """The unique member of the brick with the same weight as m."""
    return brick.entry(weight_of(brick.group, m))


def border_basis(brick):
    """One-step border: variable multiples of members that left the set."""
    members = brick.members()
    out = set()
    for m in brick.monomials:
        for step in AXIS:
            n = monomial_mul(m, step)
            if n not in members:
                out.add(n)
    return tuple(sorted(out))


def semigroup_generators(brick):
    """Degree-one generators of the ratio semigroup S.

    The ratios (x_i * m) / wt(x_i * m) over all members and variables
    generate the whole semigroup by telescoping; the identity is dropped.
    """
    gens = set()
    for m in brick.monomials:
        for step in AXIS:
            n = monomial_mul(m, step)
            g = monomial_div(n, wt_brick(brick, n))
            if any(g):
                gens.add(g)
    for g in gens:
        if weight_of(brick.group, g) != 0:
            raise AssertionError("generator %s is not invariant" % (g,))
    return tuple(sorted(gens))


@dataclass(frozen=True)
class BrickCone:
    rays: tuple
    dim: int


def brick_cone_rays(brick):
    """Extreme rays of the dual cone of the ratio semigroup, with dimension.

    Candidate rays come from pairwise cross products of the degree-one
    generators; a candidate is extreme when its active generators span a
    plane.  The cone can be lower-dimensional, which is reported rather
    than treated as an error.
    """
    G = brick.group
    gens = semigroup_generators(brick)
    candidates = set()
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            c = cross(gens[i], gens[j])
            if not any(c):
                continue
            for cand in (c, tuple(-x for x in c)):
                if all(dot(cand, g) >= 0 for g in gens):
                    candidates.add(primitivize(G, tuple(G.r * x for x in cand)))
    rays = []
    for cand in sorted(candidates):
        active = [g for g in gens if dot(cand, g) == 0]
        if matrix_rank(active) >= 2:
            rays.append(cand)
    return BrickCone(tuple(sorted(rays)), matrix_rank(rays) if rays else 0)


def brick_cone(brick):
    """The dual cone as a Cone object; requires full dimension."""
    bc = brick_cone_rays(brick)
    if bc.dim != 3:
        raise ValueError("ratio semigroup cone has dimension %d < 3" % bc.dim)
    return make_cone(brick.group, bc.rays)


def is_brick(brick):
    """Full-dimensionality of the dual cone (torus-fixed-point criterion)."""
    return brick_cone_rays(brick).dim == 3


@dataclass(frozen=True)
class SubmoduleCheck:
    closed: bool
    nonempty: bool
    proper: bool
    witness: object  # None or (member, successor)


def is_submodule_basis(brick, subset):
    """Successor-closure test for a subset of brick members.

    The subset spans a submodule exactly when every variable multiple of a
    member that stays inside the brick also stays inside the subset.
    """
    members = brick.members()
    subset = {tuple(m) for m in subset}
    unknown = subset - members
    if unknown:
        raise ValueError("subset entries %s are not brick members" % sorted(unknown))
    witness = None
    for m in sorted(subset):
        for step in AXIS:
            n = monomial_mul(m, step)
            if n in members and n not in subset:
                witness = (m, n)
                break
        if witness:
            break
    return SubmoduleCheck(
        closed=witness is None,
        nonempty=bool(subset),
        proper=subset != members,
        witness=witness,
    )


def closure_successors(brick):
    """Successor arcs m -> x_i*m inside the brick, as a weight-indexed dict."""
    members = brick.members()
    arcs = {}
    for w, m in enumerate(brick.monomials):
        succs = []
        for step in AXIS:
            n = monomial_mul(m, step)
            if n in members:
                succs.append(weight_of(brick.group, n))
        arcs[w] = tuple(succs)
    return arcs


def lift_brick(ctx, sub_brick):
    """Natural inverse of a subgroup brick through the round-down function.

    Explores multiply/divide-by-variable moves from 1, keeping monomials
    whose round-down lands in the subgroup brick; for a good subdivision
    this reaches every preimage monomial.
    """
    G = ctx.parent
    sub_members = set(sub_brick.monomials)
    if round_down(ctx, (0, 0, 0)) not in sub_members:
        raise ValueError("subgroup brick does not contain 1")
    seen = {(0, 0, 0)}
    frontier = [(0, 0, 0)]
    cap = 10 * G.r
    while frontier:
        cur = frontier.pop()
        for step in AXIS:
            for nxt in (monomial_mul(cur, step), monomial_div(cur, step)):
                if nxt in seen or round_down(ctx, nxt) not in sub_members:
                    continue
                seen.add(nxt)
                if len(seen) > cap:
                    raise RuntimeError(
                        "lift through %s exceeded %d monomials; the subgroup "
                        "brick or the subdivision is not valid" % (ctx, cap)
                    )
                frontier.append(nxt)
    by_weight = {}
    for m in sorted(seen):
        w = weight_of(G, m)
        if w in by_weight:
            raise RuntimeError(
                "lift through %s is not a transversal: weight %d hit by %s and %s"
                % (ctx, w, by_weight[w], m)
            )
        by_weight[w] = m
    if len(by_weight) != G.r:
        raise RuntimeError(
            "lift through %s found %d of %d weights" % (ctx, len(by_weight), G.r)
        )
    return GBrick(G, tuple(by_weight[w] for w in range(G.r)))


def lift_fibers(ctx, brick):
    """Partition of a lifted brick into x_k-chains over single images."""
    members = brick.members()
    done = set()
    fibers = []
    for m in brick.monomials:
        if m in done:
            continue
        chain = fiber_in(ctx, m, members)
        done.update(chain)
        fibers.append(chain)
    return fibers


def in_semigroup(gens, target, cone, cap=10**4):
    """Bounded-descent membership test for the semigroup spanned by gens.

    Heights are measured against an interior point of the full-dimensional
    cone, so each subtraction strictly descends; past the step cap the
    search reports inconclusive.
    """
    interior = tuple(sum(c) for c in zip(*cone.rays))
    normals = dual_generators(cone)
    target = tuple(target)
    memo = {}
    steps = [0]

    def feasible(t):
        return all(dot(t, g) >= 0 for g in normals)

    def search(t):
        if not any(t):
            return True
        if t in memo:
            return memo[t]
        steps[0] += 1
        if steps[0] > cap:
            raise RuntimeError("semigroup membership search inconclusive after %d steps" % cap)
        out = False
        for g in gens:
            d = monomial_div(t, g)
            if dot(interior, d) >= 0 and feasible(d) and search(d):
                out = True
                break
        memo[t] = out
        return out

    return search(target)


def check_S_equals_dual(brick, cone):
    """Certificate check: the ratio semigroup is the full dual semigroup.

    Two directions: the brick's cone must coincide with the given cone, and
    every Hilbert basis element of the dual semigroup must decompose into
    ratio generators.
    """
    gens = semigroup_generators(brick)
    for g in gens:
        if any(dot(ray, g) < 0 for ray in cone.rays):
            return False, ("generator outside dual cone", g)
    bc = brick_cone_rays(brick)
    if bc.dim != 3 or tuple(sorted(bc.rays)) != tuple(sorted(cone.rays)):
        return False, ("cone mismatch", bc.rays)
    for h in hilbert_basis(cone):
        if not in_semigroup(gens, h, cone):
            return False, ("dual semigroup element not generated", h)
    return True, None
