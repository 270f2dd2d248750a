"""Shared fixtures: the worked groups, bricks and model fans."""

import pytest

from gbricks import group_from_type, make_context, validate_prebrick
from gbricks.bricks import lift_brick
from gbricks.pipeline import hilbertized_model, star_sequence_fan


@pytest.fixture(scope="session")
def g20():
    return group_from_type(20, (1, 3, 4))


@pytest.fixture(scope="session")
def g39():
    return group_from_type(39, (1, 5, 11))


@pytest.fixture(scope="session")
def ctx20(g20):
    return {k: make_context(g20, (1, 3, 4), k) for k in (1, 2, 3)}


@pytest.fixture(scope="session")
def ctx39u(g39):
    return {k: make_context(g39, (4, 20, 5), k) for k in (1, 2, 3)}


# the two printed 20-element bricks: row bounds of the exponent tables
GAMMA1_ROWS = {0: (0, 6), 1: (-1, 5), 2: (-2, 3)}  # z-exponent -> y-range
GAMMA2_ROWS = {0: (0, 4), 1: (0, 4), 2: (-1, 3), 3: (-2, 2)}  # y-exponent -> z-range


def gamma1_monomials():
    return {
        (0, m2, m3)
        for m3, (lo, hi) in GAMMA1_ROWS.items()
        for m2 in range(lo, hi + 1)
    }


def gamma2_monomials():
    return {
        (0, m2, m3)
        for m2, (lo, hi) in GAMMA2_ROWS.items()
        for m3 in range(lo, hi + 1)
    }


@pytest.fixture(scope="session")
def gamma1(g20, ctx20):
    sub = validate_prebrick(ctx20[2].subgroup, [(0, 0, 0), (0, 0, 1), (0, 0, 2)]).brick
    return lift_brick(ctx20[2], sub)


@pytest.fixture(scope="session")
def gamma2(g20, ctx20):
    sub = validate_prebrick(
        ctx20[3].subgroup, [(0, 0, 0), (0, 1, 0), (0, 2, 0), (0, 3, 0)]
    ).brick
    return lift_brick(ctx20[3], sub)


@pytest.fixture(scope="session")
def model20(g20):
    """The resolved model of 1/20(1,3,4): one subdivision, then Hilbert fans."""
    return hilbertized_model(g20, (1, 3, 4))


@pytest.fixture(scope="session")
def model39_y(g39):
    """The 1/39(1,5,11) minimal model mapping to the type-point subdivision."""
    return hilbertized_model(g39, (1, 5, 11))


Z_CENTERS = [
    (8, 1, 10),
    (1, 5, 11),
    (4, 20, 5),
    (11, 16, 4),
    (18, 12, 3),
    (25, 8, 2),
    (32, 4, 1),
]


@pytest.fixture(scope="session")
def model39_z(g39):
    """The other 1/39 minimal model: fans out from (8,1,10)/39 instead."""
    return star_sequence_fan(g39, Z_CENTERS)
