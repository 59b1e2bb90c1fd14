"""Small exact linear algebra over the rationals (lists of lists of Fraction)."""

from __future__ import annotations

from fractions import Fraction


class SingularMatrixError(Exception):
    pass


def identity(n: int) -> list:
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def mat_mul(a: list, b: list) -> list:
    if not a or not b or len(a[0]) != len(b):
        raise ValueError("incompatible shapes %dx%d and %dx%d"
                         % (len(a), len(a[0]) if a else 0, len(b), len(b[0]) if b else 0))
    cols = len(b[0])
    return [
        [sum((row[k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(cols)]
        for row in a
    ]


def mat_inv(a: list) -> list:
    """Inverse by Gauss-Jordan elimination; raises on singular input."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    work = [[Fraction(x) for x in row] + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
            for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        inv = Fraction(1) / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return [row[n:] for row in work]


def solve(a: list, b: list) -> list:
    """Solve the square system a x = b exactly."""
    inv = mat_inv(a)
    return [sum((inv[i][k] * Fraction(b[k]) for k in range(len(b))), Fraction(0))
            for i in range(len(b))]


def rank(a: list) -> int:
    """Rank by fraction-free forward elimination."""
    if not a:
        return 0
    work = [[Fraction(x) for x in row] for row in a]
    rows, cols = len(work), len(work[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(r + 1, rows):
            if work[i][c] != 0:
                factor = work[i][c] / work[r][c]
                work[i] = [x - factor * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == rows:
            break
    return r
