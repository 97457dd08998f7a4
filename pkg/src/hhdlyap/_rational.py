"""Exact linear algebra over the rationals (row reduction on Fraction lists)."""

from fractions import Fraction


def rref(rows):
    """Reduced row echelon form. Returns (matrix, pivot_columns)."""
    m = [[Fraction(v) for v in row] for row in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(rows, ncols):
    """Basis of {v : A v = 0}, one vector per free column."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -m[i][f]
        basis.append(v)
    return basis


def solve(a, b):
    """Solve the nonsingular square system a x = b exactly."""
    n = len(a)
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or (len(pivots) > n):
        raise ZeroDivisionError("singular system")
    return [m[i][n] for i in range(n)]


def min_norm_solution(a, b):
    """Minimum Euclidean norm solution of a full-row-rank system a x = b.

    Computed as x = a^T (a a^T)^{-1} b through the normal equations.
    """
    nrows = len(a)
    if nrows == 0:
        return []
    ncols = len(a[0])
    gram = [[sum(a[i][k] * a[j][k] for k in range(ncols)) for j in range(nrows)]
            for i in range(nrows)]
    y = solve(gram, b)
    return [sum(a[i][k] * y[i] for i in range(nrows)) for k in range(ncols)]
