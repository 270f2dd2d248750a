"""Cyclic quotient groups, their toric lattices and round-down functions.

A group of type 1/r(a1,a2,a3) acts diagonally on C^3.  We work with the
lattice L = Z^3 + Z*(a1,a2,a3)/r and its dual picture of Laurent monomials:
a monomial is an integer exponent triple, a lattice point is an integer
numerator triple over the fixed denominator r.  Weights are residues mod r.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .linalg import dot


Monomial = tuple  # integer exponent triple, negative entries allowed
Point = tuple     # integer numerator triple over the group order


@dataclass(frozen=True)
class GroupType:
    """A cyclic group acting on C^3 with diagonal weights mod r."""

    r: int
    weights: tuple

    def __str__(self):
        return "1/%d(%d,%d,%d)" % (self.r, *self.weights)

    @property
    def is_trivial(self):
        return self.r == 1


def group_from_type(r, weights):
    """Build a GroupType, reducing weights mod r and rejecting non-faithful input."""
    if r < 1:
        raise ValueError("group order must be positive, got %r" % r)
    weights = tuple(int(w) % r for w in weights)
    if len(weights) != 3:
        raise ValueError("exactly three weights expected")
    g = gcd(r, gcd(weights[0], gcd(weights[1], weights[2])))
    if g > 1:
        raise ValueError(
            "weights %s define a non-faithful action of order %d; "
            "the effective order is %d" % (weights, r, r // g)
        )
    return GroupType(r, weights)


def weight_of(G, m):
    """Weight (character index mod r) of a Laurent monomial."""
    return sum(w * e for w, e in zip(G.weights, m)) % G.r


def monomial_mul(m, n):
    return tuple(a + b for a, b in zip(m, n))


def monomial_div(m, n):
    return tuple(a - b for a, b in zip(m, n))


def is_genuine(m):
    return all(e >= 0 for e in m)


def class_of(G, numerators):
    """Class t with numerators == t*weights mod r, or None if not in L.

    Points of L over denominator r are exactly the integer translates of the
    multiples of the weight vector.
    """
    r = G.r
    if any(n % 1 for n in numerators):
        return None
    for t in range(r):
        if all((n - t * w) % r == 0 for n, w in zip(numerators, G.weights)):
            return t
    return None


def in_lattice(G, numerators):
    return class_of(G, numerators) is not None


def is_primitive(G, numerators):
    """No d >= 2 divides the point inside L."""
    if all(n == 0 for n in numerators):
        return False
    g = 0
    for n in numerators:
        g = gcd(g, abs(n))
    for d in range(2, g + 1):
        if g % d == 0 and in_lattice(G, tuple(n // d for n in numerators)):
            return False
    return True


def primitivize(G, numerators):
    """The primitive lattice point on the same ray."""
    g = 0
    for n in numerators:
        g = gcd(g, abs(n))
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    best = tuple(numerators)
    for d in range(g, 1, -1):
        if g % d == 0 and in_lattice(G, tuple(n // d for n in numerators)):
            best = tuple(n // d for n in numerators)
            break
    return best


@dataclass(frozen=True)
class MembershipReport:
    in_lattice: bool
    class_t: object  # int or None
    primitive: bool


def lattice_member(G, p):
    """Membership report for an exact rational triple p.

    Returns whether p lies in L, the class t with p == t*weights/r mod Z^3,
    and whether p is primitive in L.
    """
    p = tuple(Fraction(x) for x in p)
    nums = [x * G.r for x in p]
    if any(n.denominator != 1 for n in nums):
        return MembershipReport(False, None, False)
    nums = tuple(int(n) for n in nums)
    t = class_of(G, nums)
    if t is None:
        return MembershipReport(False, None, False)
    return MembershipReport(True, t, is_primitive(G, nums))


def class_point(G, t):
    """The lattice point with numerators t*weights mod r (the point v_t)."""
    return tuple((t * w) % G.r for w in G.weights)


def type_point(G):
    """The defining point (a1,a2,a3)/r of the group type."""
    return class_point(G, 1)


def age(G, numerators):
    """Sum of numerators over r; rays of age 1 are crepant (junior)."""
    return Fraction(sum(numerators), G.r)


def is_good_subdivision(G, v):
    """Check the two conditions for a good star subdivision at v.

    Returns (ok, violations): v must generate L/Z^3 (its class is a unit
    mod r) and all pairwise numerator sums must stay <= r.
    """
    violations = []
    t = class_of(G, v)
    if t is None:
        violations.append("point %s/%d is not in the lattice" % (v, G.r))
        return False, violations
    if not is_primitive(G, v):
        violations.append("point %s/%d is not primitive" % (v, G.r))
    if gcd(t, G.r) != 1:
        violations.append("class %d is not a unit mod %d" % (t, G.r))
    for i in range(3):
        for j in range(i + 1, 3):
            if v[i] + v[j] > G.r:
                violations.append(
                    "numerator sum a%d+a%d = %d exceeds r = %d"
                    % (i + 1, j + 1, v[i] + v[j], G.r)
                )
    return not violations, violations


@dataclass(frozen=True)
class RoundDownContext:
    """Data of one subcone of the star subdivision at v.

    Carries the subgroup type of the k-th subcone, and the eigenbasis
    xi_j = x_j * x_k^(-a_j/a_k) for j != k, xi_k = x_k^(r/a_k), as exact
    rational exponent vectors.  t is the class of the center (v = t * the
    type point); the induced character map reindexes by it.
    """

    parent: GroupType
    v: tuple
    k: int  # axis index, 1-based
    a_k: int
    t: int
    subgroup: GroupType
    eigenbasis: tuple

    def __str__(self):
        return "axis %d of star subdivision of %s at %s/%d" % (
            self.k,
            self.parent,
            self.v,
            self.parent.r,
        )


def _weight_representatives(G):
    """A genuine monomial of each weight, by breadth-first search from 1."""
    reps = {0: (0, 0, 0)}
    frontier = [(0, 0, 0)]
    while len(reps) < G.r and frontier:
        nxt = []
        for m in frontier:
            for i in range(3):
                m2 = tuple(e + (1 if j == i else 0) for j, e in enumerate(m))
                w = weight_of(G, m2)
                if w not in reps:
                    reps[w] = m2
                    nxt.append(m2)
        frontier = nxt
    if len(reps) < G.r:
        raise ValueError("weights of %s do not generate all characters" % (G,))
    return reps


def make_context(G, v, k):
    """Round-down context for the k-th subcone of the star subdivision at v.

    v must be a primitive interior lattice point generating L/Z^3.  The
    subgroup type is (a1,..,-r,..,a3) mod a_k; the construction self-checks
    that the induced character map sends weight i to i mod a_k and aborts on
    mismatch.
    """
    v = tuple(int(n) for n in v)
    t = class_of(G, v)
    if t is None:
        raise ValueError("%s/%d is not a lattice point of %s" % (v, G.r, G))
    if gcd(t, G.r) != 1:
        raise ValueError(
            "%s/%d (class %d) does not generate L/Z^3 for %s" % (v, G.r, t, G)
        )
    if not is_primitive(G, v):
        raise ValueError("%s/%d is not primitive" % (v, G.r))
    if k not in (1, 2, 3):
        raise ValueError("axis index must be 1, 2 or 3")
    if any(a < 1 for a in v):
        raise ValueError("subdivision center %s/%d is not interior" % (v, G.r))
    a_k = v[k - 1]
    raw = list(v)
    raw[k - 1] = -G.r
    sub_weights = tuple(w % a_k for w in raw) if a_k > 1 else (0, 0, 0)
    subgroup = group_from_type(a_k, sub_weights)
    eigenbasis = []
    for j in range(1, 4):
        exps = [Fraction(0)] * 3
        if j == k:
            exps[k - 1] = Fraction(G.r, a_k)
        else:
            exps[j - 1] = Fraction(1)
            exps[k - 1] = Fraction(-v[j - 1], a_k)
        eigenbasis.append(tuple(exps))
    ctx = RoundDownContext(G, v, k, a_k, t, subgroup, tuple(eigenbasis))
    for w, m in _weight_representatives(G).items():
        if weight_of(subgroup, round_down(ctx, m)) != induced_character(ctx, w):
            raise AssertionError(
                "character map of %s is inconsistent at weight %d" % (ctx, w)
            )
    return ctx


def round_down(ctx, m):
    """Image of a Laurent monomial under the k-th round-down function.

    Slots j != k copy the exponent; slot k is floor((1/r) * sum a_i m_i),
    with floor toward -infinity on negatives.
    """
    out = list(m)
    out[ctx.k - 1] = dot(ctx.v, m) // ctx.parent.r
    return tuple(out)


def reindex_weight(ctx, rho):
    """The center-class reindexing t*rho mod r.

    The numerators of the center are t times the group weights, so the
    fiber and window combinatorics of the round-down function read weights
    through this bijection; for a type-point center it is the identity.
    """
    return (ctx.t * rho) % ctx.parent.r


def induced_character(ctx, rho):
    """Induced character map on weights: (t*rho mod r) mod a_k.

    For a center of class 1 this is plain reduction mod a_k.
    """
    return reindex_weight(ctx, rho) % ctx.a_k


def fiber_in(ctx, m, members):
    """The x_k-chain through m inside a membership set, as a sorted list.

    `members` decides membership (e.g. a brick); the chain extends both ways
    along x_k while round_down stays constant, which bounds it.
    """
    k = ctx.k - 1
    chain = [m]
    step = tuple(1 if i == k else 0 for i in range(3))
    cur = m
    while True:
        cur = monomial_mul(cur, step)
        if cur in members and round_down(ctx, cur) == round_down(ctx, m):
            chain.append(cur)
        else:
            break
    cur = m
    while True:
        cur = monomial_div(cur, step)
        if cur in members and round_down(ctx, cur) == round_down(ctx, m):
            chain.insert(0, cur)
        else:
            break
    return chain
