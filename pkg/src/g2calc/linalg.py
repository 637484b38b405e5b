"""Small exact linear algebra over Fractions (Gauss-Jordan elimination).

Matrices are lists of row lists. These routines are sized for the 35x7 and
21x21 systems the engine solves; nothing here is meant for large problems.
"""

from fractions import Fraction


def to_fractions(matrix):
    return [[Fraction(v) for v in row] for row in matrix]


def rref(matrix):
    """Reduced row echelon form. Returns (rows, pivot_columns)."""
    m = to_fractions(matrix)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(matrix):
    return len(rref(matrix)[1])


def transpose(matrix):
    return [list(col) for col in zip(*matrix)]


def matmul(a, b):
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def inverse(matrix):
    """Exact inverse of a square matrix; raises ZeroDivisionError if singular."""
    n = len(matrix)
    aug = [list(row) + eye for row, eye in zip(to_fractions(matrix), identity(n))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def det(matrix):
    m = to_fractions(matrix)
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            result = -result
        result *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return result


def left_inverse(matrix):
    """(A^T A)^{-1} A^T for a full-column-rank A."""
    at = transpose(to_fractions(matrix))
    return matmul(inverse(matmul(at, matrix)), at)


def nullspace(matrix, ncols=None):
    """Basis of {x : A x = 0} as a list of Fraction vectors."""
    if not matrix:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    red, pivots = rref(matrix)
    n = len(red[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis
