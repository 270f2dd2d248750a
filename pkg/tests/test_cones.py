"""Cones, fans, duality, Reid classification and plane searches."""

from fractions import Fraction

import pytest

from gbricks import (
    classify_cone,
    cones_tile,
    coplanar_lattice_points,
    discrepancies,
    dual_generators,
    fan_from_cones,
    group_from_type,
    hilbert_basis,
    is_relatively_nef_K,
    make_cone,
    positive_octant,
    star_subdivide,
)
from gbricks.cones import is_smooth, normalized_volume, support_monomial


def cone_sets(fan):
    return {tuple(sorted(fan.rays[i] for i in c)) for c in fan.maximal_cones}


def test_star_subdivision_interior(g20):
    fan = star_subdivide(positive_octant(g20), (1, 3, 4))
    assert cone_sets(fan) == {
        tuple(sorted([(1, 3, 4), (0, 20, 0), (0, 0, 20)])),
        tuple(sorted([(20, 0, 0), (1, 3, 4), (0, 0, 20)])),
        tuple(sorted([(20, 0, 0), (0, 20, 0), (1, 3, 4)])),
    }
    assert cones_tile(fan, positive_octant(g20))


def test_star_subdivision_at_ray(g20):
    fan = star_subdivide(positive_octant(g20), (20, 0, 0))
    assert cone_sets(fan) == {tuple(sorted(positive_octant(g20).rays))}


def test_star_subdivision_second_center(g39):
    fan = star_subdivide(positive_octant(g39), (1, 5, 11))
    fan = star_subdivide(fan, (8, 1, 10))
    assert tuple(sorted([(8, 1, 10), (1, 5, 11), (0, 0, 39)])) in cone_sets(fan)
    assert cones_tile(fan, positive_octant(g39))


def test_dual_generators(g20, g39):
    trivial = group_from_type(1, (0, 0, 0))
    assert dual_generators(positive_octant(trivial)) == (
        (0, 0, 1),
        (0, 1, 0),
        (1, 0, 0),
    )
    # octant duals scale into the invariant lattice
    assert dual_generators(positive_octant(g20)) == (
        (0, 0, 5),
        (0, 20, 0),
        (20, 0, 0),
    )
    c = make_cone(g20, [(1, 3, 4), (0, 20, 0), (0, 0, 20)])
    assert dual_generators(c) == ((-4, 0, 1), (-3, 1, 0), (20, 0, 0))
    quad = make_cone(g39, [(39, 0, 0), (0, 39, 0), (1, 5, 11), (8, 1, 10)])
    assert len(dual_generators(quad)) == 4


def test_dual_generators_bruteforce_oracle(g20):
    """Each dual ray vanishes on two primal rays and is nonnegative on all."""
    c = make_cone(g20, [(1, 3, 4), (0, 20, 0), (0, 0, 20)])
    for g in dual_generators(c):
        pairings = [sum(a * b for a, b in zip(ray, g)) for ray in c.rays]
        assert all(p >= 0 for p in pairings)
        assert sum(1 for p in pairings if p == 0) == 2


def test_hilbert_basis_smooth(g20):
    c = make_cone(g20, [(1, 3, 4), (0, 20, 0), (0, 0, 20)])
    assert hilbert_basis(c) == ((-4, 0, 1), (-3, 1, 0), (20, 0, 0))


def test_hilbert_basis_octants():
    G3 = group_from_type(3, (1, 1, 1))
    basis = hilbert_basis(positive_octant(G3))
    # all ten degree-3 monomials in three variables
    assert len(basis) == 10
    assert all(sum(m) == 3 and min(m) >= 0 for m in basis)
    trivial = group_from_type(1, (0, 0, 0))
    assert hilbert_basis(positive_octant(trivial)) == (
        (0, 0, 1),
        (0, 1, 0),
        (1, 0, 0),
    )


def test_hilbert_basis_generates(g20):
    """Brute-force check: low bounded invariants decompose into the basis."""
    G4 = group_from_type(4, (1, 3, 0))
    basis = set(hilbert_basis(positive_octant(G4)))
    from itertools import product

    invariants = [
        m
        for m in product(range(7), repeat=3)
        if sum(m) and (m[0] + 3 * m[1]) % 4 == 0
    ]

    def decomposes(m):
        if not any(m):
            return True
        return any(
            decomposes(tuple(a - b for a, b in zip(m, g)))
            for g in basis
            if all(a >= b for a, b in zip(m, g))
        )

    assert all(decomposes(m) for m in invariants)


def test_classify_cone(g20):
    assert classify_cone(g20, positive_octant(g20)).kind == "none"
    c2 = make_cone(g20, [(20, 0, 0), (1, 3, 4), (0, 0, 20)])
    cc = classify_cone(g20, c2)
    assert (cc.kind, cc.gorenstein) == ("canonical", True)
    c1 = make_cone(g20, [(1, 3, 4), (0, 20, 0), (0, 0, 20)])
    assert classify_cone(g20, c1).kind == "smooth"


def test_discrepancies(g20, g39):
    fan = star_subdivide(positive_octant(g20), (1, 3, 4))
    disc = discrepancies(g20, fan)
    assert disc[(1, 3, 4)] == Fraction(-3, 5)
    fan39 = star_subdivide(positive_octant(g39), (8, 1, 10))
    assert discrepancies(g39, fan39)[(8, 1, 10)] == Fraction(-20, 39)
    # junior (age one) rays are crepant
    G3 = group_from_type(3, (1, 1, 1))
    fan3 = star_subdivide(positive_octant(G3), (1, 1, 1))
    assert discrepancies(G3, fan3)[(1, 1, 1)] == 0


def test_nef_check(g20, model20):
    trivial = group_from_type(1, (0, 0, 0))
    blowup = star_subdivide(positive_octant(trivial), (1, 1, 1))
    report = is_relatively_nef_K(trivial, blowup)
    assert not report.nef and report.witness is not None
    assert is_relatively_nef_K(g20, model20).nef
    # crepant fan over a Gorenstein cone: all support monomials equal
    G3 = group_from_type(3, (1, 1, 1))
    crepant = star_subdivide(positive_octant(G3), (1, 1, 1))
    assert is_relatively_nef_K(G3, crepant).nef


def test_coplanar_lattice_points(g20, g39):
    e1, e2, e3 = (20, 0, 0), (0, 20, 0), (0, 0, 20)
    v = (1, 3, 4)
    region3 = make_cone(g20, [e1, e2, v])
    assert coplanar_lattice_points(g20, [e1, e2, v], region3) == [
        (5, 15, 0),
        (10, 10, 0),
        (15, 5, 0),
    ]
    region2 = make_cone(g20, [e1, v, e3])
    assert coplanar_lattice_points(g20, [e1, v, e3], region2) == [(7, 1, 8)]
    quad = make_cone(g39, [(39, 0, 0), (0, 39, 0), (1, 5, 11), (8, 1, 10)])
    pts = coplanar_lattice_points(g39, [(39, 0, 0), (0, 39, 0), (1, 5, 11)], quad)
    assert pts == [(4, 20, 5), (11, 16, 4), (18, 12, 3), (25, 8, 2), (32, 4, 1)]


def test_cones_tile(g20, model20):
    octant = positive_octant(g20)
    fan = star_subdivide(octant, (1, 3, 4))
    assert cones_tile(fan, octant)
    partial = fan_from_cones(
        g20, [[(1, 3, 4), (0, 20, 0), (0, 0, 20)], [(20, 0, 0), (1, 3, 4), (0, 0, 20)]]
    )
    assert not cones_tile(partial, octant)
    assert cones_tile(model20, octant)


def test_duality_involution(g20):
    """Dual rays of the dual generators give back the cone."""
    from gbricks.linalg import cross, dot
    from gbricks.lattice import primitivize

    for rays in [
        [(1, 3, 4), (0, 20, 0), (0, 0, 20)],
        [(20, 0, 0), (1, 3, 4), (7, 1, 8)],
        [(20, 0, 0), (0, 20, 0), (0, 0, 20)],
    ]:
        c = make_cone(g20, rays)
        gens = dual_generators(c)
        back = set()
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                cand = cross(gens[i], gens[j])
                if not any(cand):
                    continue
                for sign in (cand, tuple(-x for x in cand)):
                    if all(dot(sign, g) >= 0 for g in gens):
                        back.add(primitivize(g20, tuple(20 * x for x in sign)))
        assert back == set(c.rays)


def test_support_monomial_and_volume(g20):
    c = make_cone(g20, [(20, 0, 0), (1, 3, 4), (0, 0, 20)])
    m = support_monomial(c)
    assert m == (1, Fraction(5), 1) or m == (Fraction(1), Fraction(5), Fraction(1))
    assert normalized_volume(c) == 3
    assert is_smooth(make_cone(g20, [(1, 3, 4), (0, 20, 0), (0, 0, 20)]))
