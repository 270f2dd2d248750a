"""Group arithmetic, lattice membership and round-down functions."""

from fractions import Fraction

import pytest

from gbricks import (
    group_from_type,
    induced_character,
    is_good_subdivision,
    lattice_member,
    make_context,
    round_down,
    weight_of,
)
from gbricks.lattice import class_point, is_primitive, primitivize, type_point


def test_group_construction():
    G = group_from_type(20, (1, 3, 4))
    assert (G.r, G.weights) == (20, (1, 3, 4))
    trivial = group_from_type(1, (0, 0, 0))
    assert trivial.is_trivial
    # weights reduce mod r
    assert group_from_type(5, (6, 7, 3)).weights == (1, 2, 3)


def test_group_rejects_nonfaithful():
    with pytest.raises(ValueError, match="effective order is 3"):
        group_from_type(6, (2, 4, 2))


def test_weight_of(g20):
    assert weight_of(g20, (0, 1, 2)) == 11  # y*z^2
    assert weight_of(g20, (0, 0, 0)) == 0
    assert weight_of(g20, (0, 3, -2)) == 1  # y^3 z^-2
    # additivity
    assert (
        weight_of(g20, (1, 2, 3)) == (weight_of(g20, (1, 0, 0)) + weight_of(g20, (0, 2, 3))) % 20
    )


def test_lattice_member(g20, g39):
    rep = lattice_member(g20, (Fraction(7, 20), Fraction(1, 20), Fraction(8, 20)))
    assert (rep.in_lattice, rep.class_t, rep.primitive) == (True, 7, True)
    rep = lattice_member(g20, (1, 0, 0))
    assert (rep.in_lattice, rep.class_t, rep.primitive) == (True, 0, True)
    rep = lattice_member(g39, (Fraction(8, 39), Fraction(1, 39), Fraction(10, 39)))
    assert (rep.in_lattice, rep.class_t, rep.primitive) == (True, 8, True)
    # not in the lattice at all
    assert not lattice_member(g20, (Fraction(1, 20), 0, 0)).in_lattice
    assert not lattice_member(g20, (Fraction(1, 7), 0, 0)).in_lattice


def test_class_points(g39):
    assert class_point(g39, 1) == (1, 5, 11)
    assert class_point(g39, 4) == (4, 20, 5)
    assert class_point(g39, 8) == (8, 1, 10)
    assert type_point(g39) == (1, 5, 11)
    # v_2 is twice v_1, hence not primitive
    assert not is_primitive(g39, (2, 10, 22))
    assert primitivize(g39, (2, 10, 22)) == (1, 5, 11)


def test_make_context_subgroups(g20, g39, ctx20, ctx39u):
    assert str(ctx20[2].subgroup) == "1/3(1,1,1)"
    assert str(ctx20[3].subgroup) == "1/4(1,3,0)"
    assert ctx20[1].subgroup.is_trivial
    assert str(ctx39u[1].subgroup) == "1/4(1,0,1)"
    assert str(ctx39u[2].subgroup) == "1/20(4,1,5)"
    assert str(ctx39u[3].subgroup) == "1/5(4,0,1)"
    ctx = make_context(g39, (4, 20, 5), 2)
    assert ctx.t == 4 and ctx.a_k == 20


def test_make_context_rejects_bad_centers(g39):
    # class 3 is not a unit mod 39
    with pytest.raises(ValueError, match="does not generate"):
        make_context(g39, (3, 15, 33), 1)
    G = group_from_type(4, (1, 0, 1))
    with pytest.raises(ValueError, match="not interior"):
        make_context(G, (1, 0, 1), 2)


def test_round_down(ctx20):
    assert round_down(ctx20[2], (0, 3, 2)) == (0, 0, 2)  # y^3 z^2 -> zeta^2
    assert round_down(ctx20[2], (0, 0, 0)) == (0, 0, 0)
    assert round_down(ctx20[3], (0, 3, -2)) == (0, 3, 0)  # y^3 z^-2 -> beta^3
    # floor toward -infinity on negatives
    assert round_down(ctx20[2], (0, -1, 0)) == (0, -1, 0)


def test_induced_character(ctx20):
    assert induced_character(ctx20[2], 7) == 1
    assert induced_character(ctx20[2], 0) == 0
    assert induced_character(ctx20[3], 19) == 3


def test_induced_character_nontrivial_class(ctx39u):
    # center (4,20,5)/39 has class 4: the map is (4*i mod 39) mod a_k
    ctx = ctx39u[1]
    assert induced_character(ctx, 1) == (4 % 39) % 4
    assert induced_character(ctx, 11) == (44 % 39) % 4
    assert induced_character(ctx, 10) == (40 % 39) % 4 == 1


def test_good_subdivision(g20, g39):
    assert is_good_subdivision(g20, (1, 3, 4))[0]
    G2 = group_from_type(2, (1, 1, 1))
    assert is_good_subdivision(G2, (1, 1, 1))[0]  # boundary a_i + a_j = r allowed
    assert is_good_subdivision(g39, (4, 20, 5))[0]
    ok, violations = is_good_subdivision(g39, (3, 15, 33))
    assert not ok and violations
