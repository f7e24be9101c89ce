"""Exact rational and integer linear algebra helpers.

Everything operates on tuples of Fraction or int; no floating point.  The
matrices involved are tiny (dimension at most seven), so plain Gaussian
elimination over Fraction is fast enough everywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


Vec = tuple[Fraction, ...]


def frac_vec(v) -> Vec:
    return tuple(Fraction(x) for x in v)


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(a, s):
    return tuple(x * s for x in a)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def gcd_list(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, abs(int(v)))
    return g


def clear_denominators(v) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    fr = [Fraction(x) for x in v]
    lcm = 1
    for x in fr:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in fr]
    g = gcd_list(ints)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def primitive(v) -> tuple[int, ...]:
    """Integer vector divided by the gcd of its entries; zero stays zero."""
    ints = [int(x) for x in v]
    g = gcd_list(ints)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def sign_normalized(v) -> tuple[int, ...]:
    """Flip sign so the leading nonzero entry is positive (for free-sign normals)."""
    for x in v:
        if x != 0:
            return tuple(-y for y in v) if x < 0 else tuple(v)
    return tuple(v)


def _echelon(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Row-reduce in place; returns (reduced rows, pivot column indices)."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(vectors) -> int:
    vecs = [[Fraction(x) for x in v] for v in vectors]
    if not vecs:
        return 0
    _, pivots = _echelon(vecs)
    return len(pivots)


def solve(matrix, rhs) -> Vec | None:
    """One solution of matrix*x = rhs, or None if inconsistent.

    Underdetermined systems return the solution with free variables zero.
    """
    m = [list(frac_vec(row)) + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    ncols = len(matrix[0]) if matrix else 0
    reduced, pivots = _echelon(m)
    for row in reduced:
        if all(x == 0 for x in row[:ncols]) and row[ncols] != 0:
            return None
    if len(pivots) < len(reduced):
        # pivot in the rhs column means inconsistency; handled above
        pass
    sol = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        if c < ncols:
            sol[c] = reduced[r][ncols]
        else:
            return None
    return tuple(sol)


def solve_unique(matrix, rhs) -> Vec | None:
    """Unique solution of a square (or overdetermined full-rank) system, else None."""
    sol = solve(matrix, rhs)
    if sol is None:
        return None
    ncols = len(matrix[0])
    if rank(matrix) < ncols:
        return None
    return sol


def nullspace(vectors) -> list[Vec]:
    """Basis of {x : v . x = 0 for every row v}."""
    vecs = [list(frac_vec(v)) for v in vectors]
    if not vecs:
        return []
    ncols = len(vecs[0])
    reduced, pivots = _echelon(vecs)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, c in enumerate(pivots):
            x[c] = -reduced[r][f]
        basis.append(tuple(x))
    return basis


def det(matrix) -> Fraction:
    m = [list(frac_vec(row)) for row in matrix]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = None
        for i in range(c, n):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        inv = Fraction(1) / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def integer_kernel(matrix) -> list[tuple[int, ...]]:
    """Basis of the integer kernel {x in Z^n : matrix*x = 0}.

    Column elimination with unimodular operations only, so the result is a
    basis of the full (saturated) kernel lattice.
    """
    rows = [list(map(int, r)) for r in matrix]
    n = len(rows[0]) if rows else 0
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]  # columns tracked
    work = [list(r) for r in rows]
    pivot_cols: set[int] = set()
    r = 0
    m = len(work)
    col_alive = list(range(n))

    def col_op_swap(a, b):
        for row in work:
            row[a], row[b] = row[b], row[a]
        for row in u:
            row[a], row[b] = row[b], row[a]

    def col_op_addmul(dst, src, k):
        for row in work:
            row[dst] += k * row[src]
        for row in u:
            row[dst] += k * row[src]

    row_idx = 0
    c0 = 0
    while row_idx < m and c0 < n:
        # gcd-eliminate row row_idx across columns c0..n-1
        while True:
            nz = [c for c in range(c0, n) if work[row_idx][c] != 0]
            if not nz:
                break
            cmin = min(nz, key=lambda c: abs(work[row_idx][c]))
            if cmin != c0:
                col_op_swap(c0, cmin)
            done = True
            for c in range(c0 + 1, n):
                q = work[row_idx][c] // work[row_idx][c0]
                if q:
                    col_op_addmul(c, c0, -q)
                if work[row_idx][c] != 0:
                    done = False
            if done:
                break
        if work[row_idx][c0] != 0:
            c0 += 1
        row_idx += 1
    # columns c0..n-1 are in the kernel of every row
    kernel = []
    for c in range(c0, n):
        vec = tuple(u[i][c] for i in range(n))
        if any(vec):
            kernel.append(vec)
    return kernel


def lattice_basis(direction_vectors) -> list[tuple[int, ...]]:
    """Basis of span(direction_vectors) intersected with Z^n (the saturation).

    Input vectors may be rational; only their span matters.
    """
    dirs = [frac_vec(v) for v in direction_vectors]
    dirs = [d for d in dirs if any(x != 0 for x in d)]
    if not dirs:
        return []
    n = len(dirs[0])
    ortho = nullspace(dirs)
    if not ortho:
        # full span
        return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    constraints = [clear_denominators(v) for v in ortho]
    return integer_kernel(constraints)


def hadamard_bound(int_rows, k) -> int:
    """Strict upper bound on |vertex coordinates| of {x : rows*x <= bounds}.

    Cramer: every basic solution coordinate is a ratio of k x k integer
    determinants with |numerator| <= k! * A^k and |denominator| >= 1.
    """
    a = 1
    for row in int_rows:
        for x in row:
            a = max(a, abs(int(x)))
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    return fact * a**k + 1
