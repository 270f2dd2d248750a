"""Exact toric models of cyclic quotient singularities C^3/G.

The library builds weight transversals of Laurent monomials (bricks) for
the charts of birational models, lifts them through round-down functions
along star subdivisions, and produces exact GIT stability certificates
theta_P + m*vartheta for the assembled bricksets.
"""

from .lattice import (
    GroupType,
    RoundDownContext,
    class_point,
    group_from_type,
    induced_character,
    is_good_subdivision,
    lattice_member,
    make_context,
    round_down,
    type_point,
    weight_of,
)
from .cones import (
    Cone,
    Fan,
    classify_cone,
    cones_tile,
    coplanar_lattice_points,
    discrepancies,
    dual_generators,
    fan_from_cones,
    hilbert_basis,
    is_relatively_nef_K,
    make_cone,
    positive_octant,
    star_subdivide,
)
from .bricks import (
    GBrick,
    border_basis,
    brick_cone,
    brick_cone_rays,
    check_S_equals_dual,
    is_brick,
    is_submodule_basis,
    lift_brick,
    semigroup_generators,
    validate_prebrick,
    wt_brick,
)
from .stability import (
    Affine,
    Theta,
    check_vartheta_properties,
    find_m,
    make_theta,
    min_margin,
    min_margin_bruteforce,
    pushforward,
    pushforward_rank,
    shift_vartheta,
    solve_partial,
    submodule_theta,
    theta_basis,
    theta_plus,
    vartheta_catalog,
)
from .pipeline import (
    Brickset,
    EndToEndFailure,
    FamilyTag,
    MorphismError,
    StabilityCertificate,
    build_brickset,
    canonical_model_fan,
    certify_model,
    detect_family,
    end_to_end,
    ghilb,
    hilbertized_model,
    restrict_fan,
    second_center,
    smooth_cone_brick,
    split_by_star,
    star_sequence_fan,
    verify_brickset,
)
from .docio import parse, parse_group_type, serialize
from .render import render_fan_svg

__version__ = "0.1.0"
