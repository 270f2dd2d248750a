"""Stability parameters and exact margin computations.

Parameters are rational functions on the characters summing to zero.  A
parameter may be affine in a multiplier m (values p + q*m), which is how
composite parameters theta_P + m*vartheta are handled symbolically.  The
stability decision itself is a minimum-weight closure problem over the
successor digraph of a brick, solved exactly by integer max-flow.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import networkx as nx

from .bricks import closure_successors
from .lattice import induced_character, reindex_weight, weight_of
from .linalg import matrix_rank, solve_linear_system


@dataclass(frozen=True)
class Affine:
    """An exact value p + q*m, affine in the stabilizing multiplier m."""

    const: Fraction
    slope: Fraction

    def at(self, m):
        return self.const + self.slope * m

    def __add__(self, other):
        if isinstance(other, Affine):
            return Affine(self.const + other.const, self.slope + other.slope)
        return Affine(self.const + Fraction(other), self.slope)

    __radd__ = __add__

    def __mul__(self, c):
        c = Fraction(c)
        return Affine(self.const * c, self.slope * c)

    __rmul__ = __mul__

    def __repr__(self):
        return "%s + %s*m" % (self.const, self.slope)


def _as_value(x):
    return x if isinstance(x, Affine) else Fraction(x)


def value_at(x, m):
    return x.at(m) if isinstance(x, Affine) else x


@dataclass(frozen=True)
class Theta:
    """A stability parameter: one value per character, summing to zero."""

    values: tuple

    def __post_init__(self):
        total = sum(self.values, Fraction(0))
        if isinstance(total, Affine):
            bad = total.const != 0 or total.slope != 0
        else:
            bad = total != 0
        if bad:
            raise ValueError("parameter values sum to %s, not zero" % (total,))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i % len(self.values)]

    def at(self, m):
        return Theta(tuple(value_at(x, m) for x in self.values))

    @property
    def symbolic(self):
        return any(isinstance(x, Affine) for x in self.values)


def make_theta(values):
    return Theta(tuple(_as_value(x) for x in values))


def theta_zero(r):
    return Theta((Fraction(0),) * r)


def theta_add(*thetas):
    n = len(thetas[0])
    return Theta(tuple(sum((t[i] for t in thetas), Fraction(0)) for i in range(n)))


def theta_scale(c, theta):
    return Theta(tuple(x * Fraction(c) for x in theta.values))


def compose_with_multiplier(theta_p, vartheta):
    """theta_P + m*vartheta as a symbolic parameter."""
    return Theta(
        tuple(
            Affine(Fraction(p), Fraction(q))
            for p, q in zip(theta_p.values, vartheta.values)
        )
    )


def normalize_integral(theta):
    """Scale a rational parameter to integer values (stability is scale-invariant)."""
    denom = 1
    for x in theta.values:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    return theta_scale(denom, theta)


def theta_basis(G, i):
    """Basis vector: +1 at character i, -1 at the trivial character."""
    if not 1 <= i < G.r:
        raise ValueError("basis index must satisfy 1 <= i < r, got %d" % i)
    vals = [Fraction(0)] * G.r
    vals[i] = Fraction(1)
    vals[0] = Fraction(-1)
    return Theta(tuple(vals))


def theta_plus(G):
    """The chamber of Hilbert-scheme stability: +1 off the trivial character."""
    if G.r < 2:
        raise ValueError("theta_plus needs group order at least 2")
    return Theta((Fraction(-(G.r - 1)),) + (Fraction(1),) * (G.r - 1))


def pushforward(ctx, theta):
    """Sum the parameter over the fibers of the induced character map."""
    vals = [Fraction(0)] * ctx.a_k
    for i, x in enumerate(theta.values):
        j = induced_character(ctx, i)
        vals[j] = vals[j] + x
    return Theta(tuple(vals))


def pushforward_rank(G, ctxs):
    """Rank of the combined pushforward map on the parameter space.

    Rows are the images of the basis vectors; the target dimension is the
    sum of (a_k - 1) over the contexts.
    """
    rows = []
    for i in range(1, G.r):
        row = []
        for ctx in ctxs:
            vec = [Fraction(0)] * ctx.a_k
            vec[induced_character(ctx, i)] += 1
            vec[0] -= 1
            row.extend(vec)
        rows.append(row)
    rank = matrix_rank(rows) if rows else 0
    target_dim = sum(ctx.a_k - 1 for ctx in ctxs)
    return rank, target_dim


@dataclass(frozen=True)
class SolveResult:
    theta: object  # Theta or None
    rank: int
    target_dim: int
    surjective: bool

    @property
    def solved(self):
        return self.theta is not None


def solve_partial(G, ctxs, targets):
    """Particular solution of the pushforward system, free variables zero.

    Solves (pushforward_k)(theta) = target_k for all given contexts by exact
    elimination.  Returns the solution together with rank data; an
    inconsistent system yields theta None rather than an exception.
    """
    if len(ctxs) != len(targets):
        raise ValueError("need one target per context")
    rows, rhs = [], []
    for ctx, target in zip(ctxs, targets):
        a = ctx.a_k
        if len(target) != a:
            raise ValueError(
                "target for axis %d has length %d, expected %d"
                % (ctx.k, len(target), a)
            )
        if sum(Fraction(x) for x in target) != 0:
            raise ValueError("target for axis %d does not sum to zero" % ctx.k)
        for j in range(a):
            row = [Fraction(0)] * G.r
            for i in range(G.r):
                if induced_character(ctx, i) == j:
                    row[i] = Fraction(1)
            rows.append(row)
            rhs.append(Fraction(target[j]))
    rank, target_dim = pushforward_rank(G, ctxs)
    if not rows:
        return SolveResult(theta_zero(G.r), rank, target_dim, rank == target_dim)
    sol = solve_linear_system(rows, rhs)
    theta = Theta(tuple(sol)) if sol is not None else None
    return SolveResult(theta, rank, target_dim, rank == target_dim)


# ---------------------------------------------------------------------------
# the vartheta catalog


def _accumulate(r, contributions):
    vals = [Fraction(0)] * r
    for w, c in contributions:
        if not 0 <= w < r:
            raise ValueError("catalog weight %d is outside [0, %d)" % (w, r))
        vals[w] += c
    return vals


def vartheta_case1(G, a, b, c):
    """Family r = abc+a+b+1: -1 on [0,b) and at a+b, +1 on [r-b-1, r)."""
    r = G.r
    if r != a * b * c + a + b + 1:
        raise ValueError("order %d does not match abc+a+b+1 for %s" % (r, (a, b, c)))
    if gcd(a, b) != 1 or min(a, b, c) < 1:
        raise ValueError("case1 needs coprime positive a, b and positive c")
    contributions = [(w, Fraction(-1)) for w in range(b)]
    contributions.append((a + b, Fraction(-1)))
    contributions += [(w, Fraction(1)) for w in range(r - b - 1, r)]
    return Theta(tuple(_accumulate(r, contributions)))


def _vartheta_case2(G, a, b, k, c, low_special):
    r = G.r
    if b != a * k + 1:
        raise ValueError("case2 needs b = a*k+1, got b=%d a=%d k=%d" % (b, a, k))
    if r != a * b * c + a - 2 * b + 1:
        raise ValueError(
            "order %d does not match abc+a-2b+1 for %s" % (r, (a, b, c, k))
        )
    contributions = [(w, Fraction(-1)) for w in range(b)]
    contributions.append((low_special, Fraction(-1)))
    contributions.append((r - a - b + 2, Fraction(1)))
    contributions += [(w, Fraction(1)) for w in range(r - b, r)]
    vals = _accumulate(r, contributions)
    if not any(vals):
        raise ValueError("case2 parameter vanishes for %s" % ((a, b, c, k),))
    return Theta(tuple(vals))


def vartheta_case2a(G, a, b, c, k):
    """Family r = abc+a-2b+1, c >= 2: special negative weight 2ab-5b+3."""
    if c < 2:
        raise ValueError("case2a needs c >= 2")
    if a < 4:
        raise ValueError("case2a catalog supports a >= 4 only, got a=%d" % a)
    return _vartheta_case2(G, a, b, k, c, 2 * a * b - 5 * b + 3)


def vartheta_case2b(G, a, b, k):
    """Family r = ab+a-2b+1 (c = 1): special negative weight ab-5b+3.

    For a = 5 the special weight falls inside the negative band and the
    contributions accumulate; a = 4 puts it below zero and is rejected.
    """
    if a < 5:
        raise ValueError(
            "case2b special weight %d is outside [0, r) for a=%d" % (a * b - 5 * b + 3, a)
        )
    return _vartheta_case2(G, a, b, k, 1, a * b - 5 * b + 3)


def vartheta_custom(G, values):
    theta = make_theta(values)
    if len(theta) != G.r:
        raise ValueError("custom parameter has length %d, expected %d" % (len(theta), G.r))
    if not any(theta.values):
        raise ValueError("custom parameter must be nonzero")
    return theta


def vartheta_catalog(G, family):
    """Dispatch on a family key: ('case1', a, b, c) and friends."""
    kind = family[0]
    if kind == "case1":
        return vartheta_case1(G, *family[1:])
    if kind == "case2a":
        return vartheta_case2a(G, *family[1:])
    if kind == "case2b":
        return vartheta_case2b(G, *family[1:])
    if kind == "custom":
        return vartheta_custom(G, family[1])
    raise ValueError("unknown family kind %r" % (kind,))


def shift_vartheta(G, v):
    """Paired-shift parameter for a star subdivision center v.

    Reading weights through the center's class reindexing, pairing position
    p with p+s (s the lcm of the numerators) kills every residue-class sum
    mod each numerator; the bands are -1 on [0, r-s) and +1 on [s, r) in
    reindexed positions.  Returns None when s >= r leaves no room.
    """
    from .lattice import class_of

    r = G.r
    s = 1
    for a in v:
        s = s * a // gcd(s, a)
    if s >= r:
        return None
    t = class_of(G, v)
    if t is None or gcd(t, r) != 1:
        return None
    band = [Fraction(0)] * r
    for p in range(r - s):
        band[p] -= 1
    for p in range(s, r):
        band[p] += 1
    vals = [band[(t * i) % r] for i in range(r)]
    if not any(vals):
        return None
    return Theta(tuple(vals))


@dataclass(frozen=True)
class VarthetaReport:
    pushforward_zero: bool
    negative_low: bool
    positive_fibers: bool
    witnesses: tuple

    @property
    def all_ok(self):
        return self.pushforward_zero and self.negative_low and self.positive_fibers


def check_vartheta_properties(ctxs, vartheta):
    """The three conditions a direction parameter must satisfy per axis.

    All combinatorics run through the center-class reindexing p = t*i mod r:
    (i) the pushforward vanishes; (ii) the parameter is negative on weights
    with reindexed position below a_k (when the position's class is not a
    singleton); (iii) every x_k-fiber tail starting at reindexed position
    >= a_k has positive total.
    """
    r = len(vartheta)
    witnesses = []
    pf_zero = neg_low = pos_fib = True
    for ctx in ctxs:
        a = ctx.a_k
        by_position = [None] * r
        for i in range(r):
            by_position[reindex_weight(ctx, i)] = vartheta[i]
        pf = pushforward(ctx, vartheta)
        if any(pf.values):
            pf_zero = False
            witnesses.append(("pushforward", ctx.k, pf.values))
        for p in range(a):
            if p + a < r and not by_position[p] < 0:
                neg_low = False
                witnesses.append(("negative_low", ctx.k, p))
        for c in range(a):
            tail = Fraction(0)
            chain = range(c + ((r - 1 - c) // a) * a, c - 1, -a)
            for p in chain:
                tail += by_position[p]
                if p >= a and not tail > 0:
                    pos_fib = False
                    witnesses.append(("positive_fiber", ctx.k, p, tail))
    return VarthetaReport(pf_zero, neg_low, pos_fib, tuple(witnesses))


# ---------------------------------------------------------------------------
# margins via minimum-weight closure


@dataclass(frozen=True)
class StabilityMargin:
    """Minimum of the parameter over closed subsets, with a witness.

    value None means the minimum is vacuous (no nonempty proper closed
    subset exists, which only happens for the trivial group).
    """

    value: object
    witness: object  # frozenset of weights or None

    @property
    def stable(self):
        return self.value is None or self.value > 0


def submodule_theta(brick, theta, subset):
    """Value of the parameter on a subset of brick members."""
    G = brick.group
    return sum((theta[weight_of(G, m)] for m in subset), Fraction(0))


def _leaves_and_roots(brick):
    arcs = closure_successors(brick)
    preds = {w: [] for w in arcs}
    for w, succs in arcs.items():
        for s in succs:
            preds[s].append(w)
    leaves = [w for w, succs in arcs.items() if not succs]
    roots = [w for w, ps in preds.items() if not ps]
    return arcs, leaves, roots


def min_margin(brick, theta):
    """Exact minimum of theta over nonempty proper closed subsets.

    One max-flow instance per (forced-in leaf, forced-out root) pair in the
    standard project-selection reduction; capacities are the parameter
    values scaled to integers.  Every closed subset contains a leaf and
    misses a root, so the restriction to such pairs is exact.
    """
    if theta.symbolic:
        raise ValueError("min_margin needs a concrete parameter; evaluate at m first")
    r = brick.group.r
    arcs, leaves, roots = _leaves_and_roots(brick)
    if r == 1:
        return StabilityMargin(None, None)
    denom = 1
    for x in theta.values:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    weight = {w: int(theta[w] * denom) for w in range(r)}
    inf = sum(abs(x) for x in weight.values()) + 1
    reachable = {}
    for w in range(r):
        seen = {w}
        stack = [w]
        while stack:
            u = stack.pop()
            for s2 in arcs[u]:
                if s2 not in seen:
                    seen.add(s2)
                    stack.append(s2)
        reachable[w] = seen
    best = None
    best_set = None
    for leaf in sorted(leaves):
        for root in sorted(roots):
            if leaf == root or root in reachable[leaf]:
                continue
            net = nx.DiGraph()
            net.add_node("s")
            net.add_node("t")
            for w in range(r):
                profit = -weight[w]
                if profit > 0:
                    net.add_edge("s", w, capacity=profit)
                elif profit < 0:
                    net.add_edge(w, "t", capacity=-profit)
            for w, succs in arcs.items():
                for s2 in succs:
                    net.add_edge(w, s2, capacity=inf)
            net.add_edge("s", leaf, capacity=inf)
            net.add_edge(root, "t", capacity=inf)
            _, (source_side, _) = nx.minimum_cut(net, "s", "t")
            chosen = frozenset(w for w in source_side if w != "s")
            if not chosen or len(chosen) == r:
                raise AssertionError("flow returned a non-proper closed set")
            val = sum((theta[w] for w in chosen), Fraction(0))
            if best is None or val < best:
                best = val
                best_set = chosen
    if best is None:
        return StabilityMargin(None, None)
    return StabilityMargin(best, best_set)


def _enumerate_closed_sets(arcs):
    """All successor-closed subsets of the weight digraph, by propagation."""
    weights = sorted(arcs)
    preds = {w: [] for w in weights}
    for w, succs in arcs.items():
        for s in succs:
            preds[s].append(w)
    results = []

    def propagate(status, w, val):
        stack = [(w, val)]
        while stack:
            u, x = stack.pop()
            cur = status.get(u)
            if cur is not None:
                if cur != x:
                    return False
                continue
            status[u] = x
            if x:
                stack.extend((s, True) for s in arcs[u])
            else:
                stack.extend((p, False) for p in preds[u])
        return True

    def branch(status):
        pending = [w for w in weights if w not in status]
        if not pending:
            results.append(frozenset(w for w in weights if status[w]))
            return
        w = pending[0]
        for val in (True, False):
            trial = dict(status)
            if propagate(trial, w, val):
                branch(trial)

    branch({})
    return results


def min_margin_bruteforce(brick, theta):
    """Exhaustive closure enumeration; oracle twin of min_margin."""
    if theta.symbolic:
        raise ValueError("min_margin needs a concrete parameter; evaluate at m first")
    r = brick.group.r
    if r > 18:
        raise ValueError("brute-force margin is limited to group order <= 18")
    arcs = closure_successors(brick)
    best = None
    best_set = None
    for closed in _enumerate_closed_sets(arcs):
        if not closed or len(closed) == r:
            continue
        val = sum((theta[w] for w in closed), Fraction(0))
        if best is None or val < best or (val == best and sorted(closed) < sorted(best_set)):
            best = val
            best_set = closed
    if best is None:
        return StabilityMargin(None, None)
    return StabilityMargin(best, best_set)


@dataclass(frozen=True)
class FindMResult:
    m: object  # int or None
    margins: tuple  # per brick: StabilityMargin at the found m
    thresholds: tuple  # per brick: minimal stabilizing m (or None)
    worst: object  # index of the worst brick on failure

    @property
    def found(self):
        return self.m is not None


def find_m(bricks, theta_p, vartheta, m_max=2**20):
    """Minimal multiplier making every brick margin strictly positive.

    Margins of theta_P + m*vartheta are concave piecewise-affine in m, so
    the positive region is an interval; a linear scan over small m is
    followed by doubling and binary search for the left endpoint.
    """
    bricks = list(bricks)
    cache = {}

    def margin(i, m):
        if (i, m) not in cache:
            cache[i, m] = min_margin(bricks[i], theta_add(theta_p, theta_scale(m, vartheta)))
        return cache[i, m]

    def all_positive(m):
        return all(margin(i, m).stable for i in range(len(bricks)))

    found = None
    for m in range(1, min(65, m_max + 1)):
        if all_positive(m):
            found = m
            break
    if found is None:
        m = 128
        while m <= m_max and not all_positive(m):
            m *= 2
        if m > m_max:
            worst = min(
                range(len(bricks)),
                key=lambda i: margin(i, m_max).value if margin(i, m_max).value is not None else 0,
            )
            return FindMResult(None, (), (), worst)
        lo, hi = m // 2, m
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if all_positive(mid):
                hi = mid
            else:
                lo = mid
        found = hi
    thresholds = []
    for i in range(len(bricks)):
        thr = None
        for m in range(1, found + 1):
            if margin(i, m).stable:
                thr = m
                break
        thresholds.append(thr)
    margins = tuple(margin(i, found) for i in range(len(bricks)))
    return FindMResult(found, margins, tuple(thresholds), None)


def margin_affine(brick, theta_p, vartheta, witness):
    """Affine form of the margin attained by a witness closed set."""
    if witness is None:
        return None
    const = sum((theta_p[w] for w in witness), Fraction(0))
    slope = sum((vartheta[w] for w in witness), Fraction(0))
    return Affine(Fraction(const), Fraction(slope))


def min_margin_symbolic(brick, theta):
    """Margin of a symbolic parameter as an affine function of m.

    Valid for large m: beyond every crossing of two candidate affine margins
    the minimizing closed set is constant, so two evaluations pin the line.
    Crossings are bounded by constants over slope gaps, both controlled by
    the parameter's denominators.
    """
    if not theta.symbolic:
        margin = min_margin(brick, theta)
        if margin.value is None:
            return None, None
        return Affine(margin.value, Fraction(0)), margin.witness
    consts = [x.const if isinstance(x, Affine) else Fraction(x) for x in theta.values]
    slopes = [x.slope if isinstance(x, Affine) else Fraction(0) for x in theta.values]
    denom = 1
    for x in slopes:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    bound = 2 * denom * sum(abs(c) for c in consts) + 2
    first = min_margin(brick, theta.at(bound))
    second = min_margin(brick, theta.at(bound + 1))
    if first.value is None:
        return None, None
    slope = second.value - first.value
    const = first.value - slope * bound
    return Affine(const, slope), first.witness
