"""Small exact linear algebra over the rationals.

Everything in the kernel is done with `fractions.Fraction`; there is no
floating point anywhere.  Vectors are tuples of length 3 unless noted.
"""

from fractions import Fraction
from math import gcd


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u):
    return tuple(c * a for a in u)


def det3(a, b, c):
    """Determinant of the 3x3 matrix with rows a, b, c."""
    return dot(a, cross(b, c))


def solve3(rows, rhs):
    """Solve the 3x3 system rows * x = rhs exactly, or return None if singular."""
    d = det3(*rows)
    if d == 0:
        return None
    cols = list(zip(*rows))
    out = []
    for j in range(3):
        m = [list(c) for c in cols]
        m[j] = list(rhs)
        out.append(Fraction(det3(*zip(*m)), 1) / d)
    return tuple(out)


def rref(matrix):
    """Reduced row echelon form of a list of Fraction rows.

    Returns (rows, pivot_columns).  The input is not modified.
    """
    rows = [[Fraction(x) for x in row] for row in matrix]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(rank, nrows):
            if rows[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for i in range(nrows):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return rows, pivots


def matrix_rank(matrix):
    if not matrix:
        return 0
    return len(rref(matrix)[1])


def solve_linear_system(matrix, rhs):
    """Particular solution of matrix * x = rhs with all free variables zero.

    Returns None when the system is inconsistent.
    """
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    reduced, pivots = rref(aug)
    ncols = len(matrix[0])
    if ncols in pivots:
        return None  # pivot in the constant column: inconsistent
    sol = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        sol[col] = reduced[i][-1]
    return tuple(sol)


def primitive_int_vector(v):
    """Scale a rational vector to a primitive integer vector (same ray)."""
    v = [Fraction(x) for x in v]
    if all(x == 0 for x in v):
        return tuple(0 for _ in v)
    denom = 1
    for x in v:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints)
