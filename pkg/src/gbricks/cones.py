"""Cones and fans over the lattice L, with exact rational geometry.

Rays are primitive lattice points stored as integer numerator triples over
the group order r.  All area comparisons happen on the cross-section plane
x+y+z = 1, where every cone inside the positive octant cuts out a convex
polygon; this makes tiling checks exact even though rays sit at different
heights.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .lattice import (
    age,
    class_point,
    in_lattice,
    is_primitive,
    primitivize,
    weight_of,
)
from .linalg import cross, det3, dot, solve3


@dataclass(frozen=True)
class Cone:
    """A pointed cone given by its primitive ray generators.

    Three rays for simplicial cones; four rays are allowed when they span a
    planar face (the only non-simplicial shape the pipeline produces).
    """

    group: object
    rays: tuple

    @property
    def simplicial(self):
        return len(self.rays) == 3 and det3(*self.rays) != 0


@dataclass(frozen=True)
class Fan:
    """Rays plus maximal cones (as sorted ray-index tuples) inside sigma_+."""

    group: object
    rays: tuple
    maximal_cones: tuple

    def cone(self, i):
        return Cone(self.group, tuple(self.rays[j] for j in self.maximal_cones[i]))

    def cones(self):
        return [self.cone(i) for i in range(len(self.maximal_cones))]


def make_cone(G, rays):
    """Validate and canonicalize a cone: primitive, pairwise distinct rays."""
    prim = []
    for ray in rays:
        ray = tuple(int(n) for n in ray)
        if not in_lattice(G, ray):
            raise ValueError("ray %s/%d is not a lattice point of %s" % (ray, G.r, G))
        prim.append(primitivize(G, ray))
    rays = tuple(sorted(set(prim)))
    if len(rays) != len(prim):
        raise ValueError("cone has proportional rays: %s" % (prim,))
    if len(rays) not in (3, 4):
        raise ValueError("only 3- or 4-ray cones are supported, got %d rays" % len(rays))
    if len(rays) == 4:
        if support_monomial(Cone(G, rays)) is None:
            raise ValueError(
                "4-ray cones must have a planar face (common support monomial)"
            )
    return Cone(G, rays)


def positive_octant(G):
    r = G.r
    return make_cone(G, ((r, 0, 0), (0, r, 0), (0, 0, r)))


def fan_from_cones(G, cone_ray_lists):
    """Assemble a fan from lists of rays, canonicalizing everything."""
    cones = [make_cone(G, rays) for rays in cone_ray_lists]
    all_rays = sorted({ray for c in cones for ray in c.rays})
    index = {ray: i for i, ray in enumerate(all_rays)}
    maximal = sorted({tuple(sorted(index[ray] for ray in c.rays)) for c in cones})
    if len(maximal) != len(cones):
        raise ValueError("fan has duplicate maximal cones")
    return Fan(G, tuple(all_rays), tuple(maximal))


# ---------------------------------------------------------------------------
# cross sections on the plane x + y + z = 1


def _section(ray):
    s = sum(ray)
    if s <= 0:
        raise ValueError("ray %s is not in the positive octant" % (ray,))
    return (Fraction(ray[0], s), Fraction(ray[1], s))


def _hull(points):
    """Convex hull (counter-clockwise) of exact 2d points, monotone chain."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _poly_area2(poly):
    """Twice the signed area of a polygon given counter-clockwise."""
    total = Fraction(0)
    for i, (x1, y1) in enumerate(poly):
        x2, y2 = poly[(i + 1) % len(poly)]
        total += x1 * y2 - x2 * y1
    return total


def _clip(subject, clip_poly):
    """Sutherland-Hodgman intersection of convex polygons (both CCW)."""
    out = list(subject)
    n = len(clip_poly)
    for i in range(n):
        a = clip_poly[i]
        b = clip_poly[(i + 1) % n]
        inp = out
        out = []
        if not inp:
            break

        def side(p):
            return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])

        for j, cur in enumerate(inp):
            prev = inp[j - 1]
            s_cur, s_prev = side(cur), side(prev)
            if s_cur >= 0:
                if s_prev < 0:
                    out.append(_segment_intersection(prev, cur, a, b))
                out.append(cur)
            elif s_prev >= 0:
                out.append(_segment_intersection(prev, cur, a, b))
    return out


def _segment_intersection(p, q, a, b):
    d1 = (q[0] - p[0], q[1] - p[1])
    d2 = (b[0] - a[0], b[1] - a[1])
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    t = Fraction((a[0] - p[0]) * d2[1] - (a[1] - p[1]) * d2[0], 1) / denom
    return (p[0] + t * d1[0], p[1] + t * d1[1])


def section_polygon(cone):
    return _hull([_section(ray) for ray in cone.rays])


def section_area2(cone):
    return _poly_area2(section_polygon(cone))


def overlap_area2(c1, c2):
    inter = _clip(section_polygon(c1), section_polygon(c2))
    if len(inter) < 3:
        return Fraction(0)
    return abs(_poly_area2(_hull(inter)))


def cones_tile(fan, ambient):
    """Whether the maximal cones tile the ambient cone.

    Exact test: every cone sits inside the ambient cone, interiors are
    pairwise disjoint, and cross-section areas add up to the ambient area.
    """
    cones = fan.cones()
    normals = dual_generators(ambient)
    for c in cones:
        for ray in c.rays:
            if any(dot(ray, g) < 0 for g in normals):
                return False
    total = sum(section_area2(c) for c in cones)
    if total != section_area2(ambient):
        return False
    for i in range(len(cones)):
        for j in range(i + 1, len(cones)):
            if overlap_area2(cones[i], cones[j]) != 0:
                return False
    return True


# ---------------------------------------------------------------------------
# duality


def _primitive_in_dual_lattice(G, direction):
    """Scale an integer direction to the primitive element of M on that ray."""
    from math import gcd

    g = 0
    for x in direction:
        g = gcd(g, abs(x))
    direction = tuple(x // g for x in direction)
    w = weight_of(G, direction)
    scale = G.r // gcd(w, G.r) if w else 1
    return tuple(x * scale for x in direction)


def _cyclic_ray_order(cone):
    """Rays ordered along the cross-section polygon boundary."""
    sections = {_section(ray): ray for ray in cone.rays}
    return [sections[p] for p in _hull(list(sections))]


@lru_cache(maxsize=None)
def dual_generators(cone):
    """Primitive elements of M generating the dual cone.

    For simplicial cones these are the scaled adjugate rows; for the planar
    4-ray shape, facet normals come from cross products of adjacent rays.
    """
    G = cone.group
    rays = cone.rays
    if len(rays) == 3:
        if det3(*rays) == 0:
            raise ValueError("cone %s is not pointed and full-dimensional" % (rays,))
        gens = []
        for i in range(3):
            others = [rays[j] for j in range(3) if j != i]
            n = cross(*others)
            if dot(rays[i], n) < 0:
                n = tuple(-x for x in n)
            gens.append(_primitive_in_dual_lattice(G, n))
        return tuple(sorted(gens))
    if len(rays) == 4:
        ordered = _cyclic_ray_order(cone)
        if len(ordered) != 4:
            raise ValueError("4-ray cone %s is degenerate" % (rays,))
        gens = []
        for i in range(4):
            a, b = ordered[i], ordered[(i + 1) % 4]
            n = cross(a, b)
            if all(x == 0 for x in n):
                raise ValueError("adjacent rays %s, %s are proportional" % (a, b))
            rest = [u for u in rays if u not in (a, b)]
            if any(dot(u, n) < 0 for u in rest):
                n = tuple(-x for x in n)
            if any(dot(u, n) < 0 for u in rest):
                raise ValueError("rays %s do not bound a convex cone" % (rays,))
            gens.append(_primitive_in_dual_lattice(G, n))
        return tuple(sorted(set(gens)))
    raise ValueError("unsupported ray count %d" % len(rays))


def cone_contains(cone, point):
    """Membership of a rational point (numerator triple over r, or fractions)."""
    return all(dot(point, g) >= 0 for g in dual_generators(cone))


@lru_cache(maxsize=None)
def hilbert_basis(cone):
    """Minimal generating set of the semigroup dual(cone) intersect M.

    Smooth cones have a free semigroup on the three dual generators.  In
    general every irreducible element lies in the zonotope spanned by the
    dual generators, so candidates are enumerated in its bounding box and
    filtered down to the non-decomposable ones.
    """
    G = cone.group
    gens = dual_generators(cone)
    if len(cone.rays) == 3 and is_smooth(cone):
        return gens
    lo = [0, 0, 0]
    hi = [0, 0, 0]
    for i in range(3):
        lo[i] = sum(min(g[i], 0) for g in gens)
        hi[i] = sum(max(g[i], 0) for g in gens)
    n_candidates = 1
    for i in range(3):
        n_candidates *= hi[i] - lo[i] + 1
    if n_candidates > 10**6:
        raise RuntimeError(
            "zonotope box for %s holds %d candidate points (limit 10^6)"
            % (cone.rays, n_candidates)
        )
    candidates = []
    for x in range(lo[0], hi[0] + 1):
        for y in range(lo[1], hi[1] + 1):
            for z in range(lo[2], hi[2] + 1):
                p = (x, y, z)
                if p == (0, 0, 0) or weight_of(G, p) != 0:
                    continue
                if any(dot(ray, p) < 0 for ray in cone.rays):
                    continue
                candidates.append(p)
    basis = []
    for h in candidates:
        reducible = False
        for g in candidates:
            if g == h:
                continue
            diff = tuple(a - b for a, b in zip(h, g))
            if all(dot(ray, diff) >= 0 for ray in cone.rays):
                reducible = True
                break
        if not reducible:
            basis.append(h)
    return tuple(sorted(basis))


@lru_cache(maxsize=None)
def support_monomial(cone):
    """The rational monomial pairing to 1 with every ray, or None.

    Rays are scaled to lattice points (numerators over r) first.
    """
    r = cone.group.r
    pts = [tuple(Fraction(n, r) for n in ray) for ray in cone.rays]
    m = solve3(pts[:3], (1, 1, 1))
    if m is None:
        return None
    for p in pts[3:]:
        if dot(p, m) != 1:
            return None
    return m


def normalized_volume(cone):
    """Index of the sublattice spanned by the rays; 1 means smooth."""
    if len(cone.rays) != 3:
        raise ValueError("normalized volume needs a simplicial cone")
    r = cone.group.r
    d = abs(det3(*cone.rays))
    if d % (r * r) != 0:
        raise AssertionError("ray determinant %d is not divisible by r^2" % d)
    return d // (r * r)


def is_smooth(cone):
    return len(cone.rays) == 3 and normalized_volume(cone) == 1


# ---------------------------------------------------------------------------
# lattice point enumeration inside cones


def lattice_points_below(cone, level, strict=False):
    """Lattice points p of the cone with <p, m> <= level (or < with strict).

    m is the support monomial; enumeration scans lattice classes inside the
    bounding box of the level simplex.
    """
    G = cone.group
    r = G.r
    m = support_monomial(cone)
    if m is None:
        raise ValueError("cone has no support monomial")
    lo = [0, 0, 0]
    hi = [0, 0, 0]
    for i in range(3):
        coords = [0] + [level * Fraction(ray[i], 1) for ray in cone.rays]
        lo[i] = min(coords)
        hi[i] = max(coords)
    found = []
    normals = dual_generators(cone)
    for t in range(r):
        base = class_point(G, t)
        ranges = []
        for i in range(3):
            start = -((base[i] - lo[i]) // r)
            stop = (hi[i] - base[i]) // r
            ranges.append(range(int(start), int(stop) + 1))
        for z0 in ranges[0]:
            for z1 in ranges[1]:
                for z2 in ranges[2]:
                    p = (base[0] + r * z0, base[1] + r * z1, base[2] + r * z2)
                    if any(dot(p, g) < 0 for g in normals):
                        continue
                    lev = dot(tuple(Fraction(n, r) for n in p), m)
                    if lev > level or (strict and lev == level):
                        continue
                    found.append(p)
    return found


@dataclass(frozen=True)
class ConeClass:
    kind: str  # smooth | terminal | canonical | none | inapplicable
    gorenstein: bool


def classify_cone(G, cone):
    """Reid's criterion: classify a simplicial cone by its lattice points.

    Terminal means no lattice points at level <= 1 besides the apex and the
    ray generators; canonical means none strictly below level 1 besides the
    apex.  Gorenstein means the support monomial is integral.
    """
    if len(cone.rays) != 3 or det3(*cone.rays) == 0:
        raise ValueError("Reid classification needs a simplicial cone")
    m = support_monomial(cone)
    if m is None:
        return ConeClass("inapplicable", False)
    gorenstein = all(x.denominator == 1 for x in m) and (
        weight_of(G, tuple(int(x) for x in m)) == 0
    )
    allowed = {(0, 0, 0)} | set(cone.rays)
    low = lattice_points_below(cone, 1)
    terminal = all(p in allowed for p in low)
    canonical = all(
        p == (0, 0, 0)
        for p in low
        if dot(tuple(Fraction(n, G.r) for n in p), m) < 1
    )
    if is_smooth(cone):
        kind = "smooth"
    elif terminal:
        kind = "terminal"
    elif canonical:
        kind = "canonical"
    else:
        kind = "none"
    return ConeClass(kind, gorenstein)


def discrepancies(G, fan):
    """Discrepancy of each non-axis ray: its age minus one."""
    out = {}
    for ray in fan.rays:
        if sum(1 for n in ray if n != 0) == 1:
            continue
        out[ray] = age(G, ray) - 1
    return out


@dataclass(frozen=True)
class NefReport:
    nef: bool
    witness: object  # None or (cone_rays, ray)


def is_relatively_nef_K(G, fan):
    """Support-function convexity test for the canonical class over the base.

    Nef over the base iff for every maximal cone with support monomial m and
    every fan ray u one has <u, m> >= 1.
    """
    for c in fan.cones():
        m = support_monomial(c)
        if m is None:
            raise ValueError("cone %s has no support monomial" % (c.rays,))
        for ray in fan.rays:
            if dot(tuple(Fraction(n, G.r) for n in ray), m) < 1:
                return NefReport(False, (c.rays, ray))
    return NefReport(True, None)


def coplanar_lattice_points(G, spanning, region):
    """Primitive lattice points on the affine plane through three points.

    The plane is spanned by three affinely independent lattice points; the
    search runs over the given region cone with numerators bounded by r, and
    the region's own rays (and the spanning points) are not reported.
    """
    r = G.r
    pts = [tuple(Fraction(n, r) for n in p) for p in spanning]
    normal = solve3(pts, (1, 1, 1))
    if normal is None:
        raise ValueError("spanning points %s are affinely dependent" % (spanning,))
    excluded = {primitivize(G, p) for p in spanning}
    excluded |= set(region.rays)
    normals = dual_generators(region)
    found = []
    for t in range(r):
        base = class_point(G, t)
        for z0 in range(0, 2):
            for z1 in range(0, 2):
                for z2 in range(0, 2):
                    p = (base[0] + r * z0, base[1] + r * z1, base[2] + r * z2)
                    if p == (0, 0, 0) or any(n > r for n in p):
                        continue
                    if dot(tuple(Fraction(n, r) for n in p), normal) != 1:
                        continue
                    if any(dot(p, g) < 0 for g in normals):
                        continue
                    if not is_primitive(G, p):
                        continue
                    if p in excluded:
                        continue
                    found.append(p)
    return sorted(set(found))


# ---------------------------------------------------------------------------
# star subdivisions


def _facets(cone):
    if len(cone.rays) == 3:
        rays = cone.rays
        return [(rays[0], rays[1]), (rays[0], rays[2]), (rays[1], rays[2])]
    ordered = _cyclic_ray_order(cone)
    return [tuple(sorted((ordered[i], ordered[(i + 1) % 4]))) for i in range(4)]


def _on_face(cone, facet, point):
    """Whether a point lies on the 2-dimensional face spanned by a facet pair."""
    a, b = facet
    if det3(a, b, point) != 0:
        return False
    n = cross(a, b)
    # coefficients over (a, b, n); the normal component must vanish
    rows = [(a[i], b[i], n[i]) for i in range(3)]
    sol = solve3(rows, point)
    if sol is None:
        return False
    alpha, beta, gamma = sol
    return gamma == 0 and alpha >= 0 and beta >= 0


def star_subdivide(target, v):
    """Star subdivision of a cone or fan at a lattice point v.

    Cones containing v are replaced by cones over their facets not
    containing v; if v is proportional to an existing ray nothing changes.
    """
    if isinstance(target, Cone):
        fan = fan_from_cones(target.group, [target.rays])
    else:
        fan = target
    G = fan.group
    v = tuple(int(n) for n in v)
    if not in_lattice(G, v):
        raise ValueError("%s/%d is not a lattice point of %s" % (v, G.r, G))
    v = primitivize(G, v)
    new_cones = []
    for c in fan.cones():
        if v in c.rays or not cone_contains(c, v):
            new_cones.append(c.rays)
            continue
        for facet in _facets(c):
            if _on_face(c, facet, v):
                continue
            new_cones.append(tuple(facet) + (v,))
    return fan_from_cones(G, new_cones)
