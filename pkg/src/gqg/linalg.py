"""Exact dense linear algebra over a ``Field`` (Gaussian elimination)."""
from __future__ import annotations

from .scalars import Field, Scalar


class SingularMatrix(ArithmeticError):
    pass


def rref(rows: list, field: Field, ncols: int | None = None):
    """Reduced row echelon form.  Returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        nz = [(j, x) for j, x in enumerate(m[r]) if not x.is_zero()]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                row = m[i]
                for j, x in nz:
                    row[j] = row[j] - f * x
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: list, field: Field) -> int:
    if not rows:
        return 0
    return len(rref(rows, field)[1])


def nullspace(rows: list, field: Field, ncols: int) -> list:
    """Basis of {v : rows . v = 0}, one vector per free column."""
    if not rows:
        return [[field.one if j == i else field.zero for j in range(ncols)] for i in range(ncols)]
    red, piv = rref(rows, field, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for i, p in enumerate(piv):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def solve(a: list, b: list, field: Field) -> list:
    """Solve a.x = b for square invertible a."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    red, piv = rref(aug, field, n)
    if piv != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return [red[i][n] for i in range(n)]


def inverse(a: list, field: Field) -> list:
    n = len(a)
    aug = [list(a[i]) + [field.one if j == i else field.zero for j in range(n)] for i in range(n)]
    red, piv = rref(aug, field, n)
    if piv != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return [row[n:] for row in red]


def det(a: list, field: Field) -> Scalar:
    n = len(a)
    m = [list(r) for r in a]
    out = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if not m[i][c].is_zero()), None)
        if piv is None:
            return field.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out = out * m[c][c]
        inv = m[c][c].inverse()
        for i in range(c + 1, n):
            if not m[i][c].is_zero():
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return out


def matmul(a: list, b: list, field: Field) -> list:
    out = []
    for row in a:
        new = []
        for j in range(len(b[0]) if b else 0):
            s = field.zero
            for k, x in enumerate(row):
                if not x.is_zero():
                    s = s + x * b[k][j]
            new.append(s)
        out.append(new)
    return out


def transpose(a: list) -> list:
    return [list(c) for c in zip(*a)] if a else []


def select_independent_rows(rows: list, field: Field) -> list:
    """Indices of a greedy (first-come) maximal independent subset of rows."""
    chosen = []
    basis: list = []  # echelon rows with their pivot columns
    for idx, row in enumerate(rows):
        v = list(row)
        for piv, brow in basis:
            if not v[piv].is_zero():
                f = v[piv]
                v = [a - f * b for a, b in zip(v, brow)]
        p = next((c for c, x in enumerate(v) if not x.is_zero()), None)
        if p is None:
            continue
        inv = v[p].inverse()
        v = [x * inv for x in v]
        basis.append((p, v))
        chosen.append(idx)
    return chosen
