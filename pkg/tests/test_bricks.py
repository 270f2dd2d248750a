"""Brick axioms, ratio semigroups, submodules and lifting."""

import pytest

from gbricks import (
    border_basis,
    check_S_equals_dual,
    group_from_type,
    is_brick,
    is_submodule_basis,
    lift_brick,
    make_cone,
    semigroup_generators,
    validate_prebrick,
    wt_brick,
)
from gbricks.bricks import GBrick, brick_cone_rays, in_semigroup
from gbricks.pipeline import smooth_cone_brick

from conftest import gamma1_monomials, gamma2_monomials


def chain_brick(G, axis=0):
    monos = [tuple(j if i == axis else 0 for i in range(3)) for j in range(G.r)]
    return validate_prebrick(G, monos).brick


def test_validate_printed_brick(g20):
    report = validate_prebrick(g20, sorted(gamma1_monomials()))
    assert report.valid
    assert chain_brick(g20) is not None


def test_validate_broken_brick(g20):
    # replace y^6 by x*y^6: the divisor chain from y^5 breaks
    monos = sorted(gamma1_monomials() - {(0, 6, 0)} | {(1, 6, 0)})
    report = validate_prebrick(g20, monos)
    assert not report.valid
    axioms = {a for a, _ in report.violations}
    assert "iii" in axioms


def test_validate_reports_all_axioms(g20):
    report = validate_prebrick(g20, [(1, 0, 0), (2, 0, 0)])
    axioms = {a for a, _ in report.violations}
    assert "i" in axioms and "ii" in axioms


def test_wt_brick(g20, gamma2):
    chain = chain_brick(g20)
    assert wt_brick(chain, (0, 1, 0)) == (3, 0, 0)  # weight of y is 3
    assert wt_brick(chain, (5, 0, 0)) == (5, 0, 0)  # members are fixed
    # the weight-1 entry of the printed second brick
    assert wt_brick(gamma2, (1, 0, 0)) == gamma2.entry(1)
    assert gamma2.entry(1) in gamma2_monomials()


def test_semigroup_generators(g20):
    chain = chain_brick(g20)
    gens = set(semigroup_generators(chain))
    assert {(20, 0, 0), (-3, 1, 0), (-4, 0, 1)} <= gens
    assert gens == {(20, 0, 0), (-3, 1, 0), (-4, 0, 1), (17, 1, 0), (16, 0, 1)}
    trivial = group_from_type(1, (0, 0, 0))
    unit = GBrick(trivial, ((0, 0, 0),))
    assert set(semigroup_generators(unit)) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_brick_cone(g20, gamma1, gamma2):
    chain = chain_brick(g20)
    assert brick_cone_rays(chain).rays == ((0, 0, 20), (0, 20, 0), (1, 3, 4))
    assert brick_cone_rays(gamma1).rays == ((1, 3, 4), (7, 1, 8), (20, 0, 0))
    assert brick_cone_rays(gamma2).rays == ((1, 3, 4), (15, 5, 0), (20, 0, 0))


def test_is_brick(g20, gamma1):
    assert is_brick(chain_brick(g20))
    assert is_brick(gamma1)
    G3 = group_from_type(3, (1, 1, 1))
    flat = validate_prebrick(G3, [(0, 0, 0), (1, 0, 0), (0, 2, 0)]).brick
    assert not is_brick(flat)
    assert brick_cone_rays(flat).dim < 3


def test_border_basis(g20):
    chain = chain_brick(g20)
    border = set(border_basis(chain))
    expected = {(20, 0, 0)}
    expected |= {(j, 1, 0) for j in range(20)}
    expected |= {(j, 0, 1) for j in range(20)}
    assert border == expected
    trivial = group_from_type(1, (0, 0, 0))
    assert set(border_basis(GBrick(trivial, ((0, 0, 0),)))) == {
        (1, 0, 0),
        (0, 1, 0),
        (0, 0, 1),
    }
    G3 = group_from_type(3, (1, 1, 1))
    zeta_chain = validate_prebrick(G3, [(0, 0, 0), (0, 0, 1), (0, 0, 2)]).brick
    assert set(border_basis(zeta_chain)) == {
        (1, 0, 0),
        (1, 0, 1),
        (1, 0, 2),
        (0, 1, 0),
        (0, 1, 1),
        (0, 1, 2),
        (0, 0, 3),
    }


def test_submodule_basis(gamma2):
    rows = [m for m in gamma2.monomials if m[1] >= 2]
    check = is_submodule_basis(gamma2, rows)
    assert check.closed and check.proper and check.nonempty
    whole = is_submodule_basis(gamma2, gamma2.monomials)
    assert whole.closed and not whole.proper
    empty = is_submodule_basis(gamma2, [])
    assert empty.closed and not empty.nonempty
    single = is_submodule_basis(gamma2, [(0, 3, -2)])
    assert not single.closed and single.witness == ((0, 3, -2), (0, 3, -1))


def test_lift_brick_printed(ctx20, gamma1, gamma2):
    assert set(gamma1.monomials) == gamma1_monomials()
    assert set(gamma2.monomials) == gamma2_monomials()


def test_lift_brick_trivial(g20, ctx20):
    chain = smooth_cone_brick(ctx20[1])
    assert set(chain.monomials) == {(j, 0, 0) for j in range(20)}
    trivial = group_from_type(1, (0, 0, 0))
    ctx = __import__("gbricks").make_context(trivial, (1, 1, 1), 1)
    assert smooth_cone_brick(ctx).monomials == ((0, 0, 0),)


def test_check_S_equals_dual(g20, gamma1):
    s1 = make_cone(g20, [(20, 0, 0), (1, 3, 4), (7, 1, 8)])
    ok, witness = check_S_equals_dual(gamma1, s1)
    assert ok and witness is None
    chain_cone = make_cone(g20, [(1, 3, 4), (0, 20, 0), (0, 0, 20)])
    ok, _ = check_S_equals_dual(chain_brick(g20), chain_cone)
    assert ok
    ok, witness = check_S_equals_dual(gamma1, chain_cone)
    assert not ok and witness is not None


def test_in_semigroup(g20):
    chain = chain_brick(g20)
    gens = semigroup_generators(chain)
    cone = make_cone(g20, brick_cone_rays(chain).rays)
    assert in_semigroup(gens, (13, 1, 1), cone)  # x^13*y*z = x^20 * y/x^3 * z/x^4
    assert in_semigroup(gens, (0, 0, 0), cone)
    assert not in_semigroup(gens, (-3, 2, 0), cone)  # y^2/x^3 needs half a generator
