"""Exact linear algebra.

Two families live here:

* division-free routines over an arbitrary commutative ring (Laurent series,
  tower elements) built on Berkowitz's algorithm, so that exact inputs give
  exact characteristic polynomials and determinants;
* Gaussian elimination over a finite field on integer-encoded entries.
"""

from __future__ import annotations

from .basefield import FqField


def berkowitz(matrix, one, zero):
    """Characteristic polynomial det(X*I - M), highest degree first.

    Only ring operations are used: for exact entries the result is exact.
    Returns ``[1, c1, ..., cn]`` with ``det(XI - M) = X^n + c1 X^(n-1) + ...``.
    """
    n = len(matrix)
    if n == 0:
        return [one]
    # work from the bottom-right 1x1 block outwards
    vec = [one, zero - matrix[n - 1][n - 1]]
    for k in range(n - 2, -1, -1):
        size = n - k - 1  # dimension of the block below/right of (k, k)
        a = matrix[k][k]
        row = [matrix[k][j] for j in range(k + 1, n)]
        col = [matrix[i][k] for i in range(k + 1, n)]
        sub = [[matrix[i][j] for j in range(k + 1, n)] for i in range(k + 1, n)]
        diags = [one, zero - a]
        item = col
        for step in range(size):
            s = zero
            for r, x in zip(row, item):
                s = s + r * x
            diags.append(zero - s)
            if step + 1 < size:
                item = [_dot(sub[i], item, zero) for i in range(size)]
        # lower-triangular Toeplitz (size+2) x (size+1) times vec
        new = []
        for i in range(size + 2):
            s = zero
            for j in range(min(i, size) + 1):
                s = s + diags[i - j] * vec[j]
            new.append(s)
        vec = new
    return vec


def _dot(row, vec, zero):
    s = zero
    for r, x in zip(row, vec):
        s = s + r * x
    return s


def det(matrix, one, zero):
    """Determinant via :func:`berkowitz` (division-free)."""
    n = len(matrix)
    c = berkowitz(matrix, one, zero)[-1]
    return c if n % 2 == 0 else zero - c


def matmul(a, b, zero):
    return [[_dot(row, [b[k][j] for k in range(len(b))], zero) for j in range(len(b[0]))] for row in a]


# ---------------------------------------------------------------------------
# finite-field elimination on integer encodings

def rref(field: FqField, rows):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = [list(r) for r in rows]
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
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                factor = m[i][c]
                m[i] = [field.sub(x, field.mul(factor, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(field: FqField, rows) -> int:
    return len(rref(field, rows)[1])


def nullspace(field: FqField, rows, ncols=None):
    """Basis of {x : M x = 0}, one vector per free column of the RREF."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(field, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * ncols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = field.neg(red[r][fc])
        basis.append(vec)
    return basis


def solve(field: FqField, columns, target):
    """Coefficients x with sum x_j * columns[j] == target, or None."""
    if not columns:
        return [] if not any(target) else None
    n = len(target)
    aug = [[columns[j][i] for j in range(len(columns))] + [target[i]] for i in range(n)]
    red, pivots = rref(field, aug)
    k = len(columns)
    if k in pivots:
        return None
    x = [0] * k
    for r, pc in enumerate(pivots):
        x[pc] = red[r][k]
    return x
