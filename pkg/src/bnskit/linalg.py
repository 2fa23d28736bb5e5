"""Exact integer linear algebra for small exponent-sum matrices."""

from __future__ import annotations

from math import gcd
from typing import Sequence


def rank(matrix: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    a = [list(map(int, row)) for row in matrix]
    if not a or not a[0]:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][c]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                a[i][j] = (a[i][j] * a[r][c] - a[r][j] * a[i][c]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == rows:
            break
    return r


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> list[int]:
    g = content(v)
    return list(v) if g == 0 else [x // g for x in v]


def integer_kernel(matrix: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Basis of ``{v in Z^ncols : matrix v = 0}``.

    Unimodular column operations bring the matrix to column echelon form; the
    transformation columns that end up paired with zero columns span the
    integer kernel (and the kernel is saturated, so the basis vectors are
    primitive).
    """
    a = [list(map(int, row)) for row in matrix]
    # u starts as the identity; column j of u tracks column j of a
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def colop(j: int, k: int, p: int, q: int, s: int, t: int) -> None:
        # (col_j, col_k) <- (p col_j + q col_k, s col_j + t col_k), det = 1
        for m in (a, u):
            for row in m:
                x, y = row[j], row[k]
                row[j], row[k] = p * x + q * y, s * x + t * y

    lead = 0
    for row_idx in range(len(a)):
        if lead == ncols:
            break
        row = a[row_idx]
        for k in range(lead + 1, ncols):
            if row[k] == 0:
                continue
            x, y = row[lead], row[k]
            g, p, q = _xgcd(x, y)
            # new lead column gets g, column k gets 0
            colop(lead, k, p, q, -y // g, x // g)
        if row[lead] != 0:
            lead += 1
    basis = [[u[i][j] for i in range(ncols)] for j in range(lead, ncols)]
    return [_sign_normalize(primitive(v)) for v in _hermite_rows(basis)]


def _hermite_rows(basis: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite reduction of a lattice basis, for canonical output."""
    b = [list(v) for v in basis]
    if not b:
        return b
    n = len(b[0])
    r = 0
    for c in range(n):
        # gcd-combine all rows >= r in column c into row r
        for i in range(r + 1, len(b)):
            if b[i][c] == 0:
                continue
            x, y = b[r][c], b[i][c]
            g, p, q = _xgcd(x, y)
            new_r = [p * s + q * t for s, t in zip(b[r], b[i])]
            new_i = [(-y // g) * s + (x // g) * t for s, t in zip(b[r], b[i])]
            b[r], b[i] = new_r, new_i
        if r < len(b) and b[r][c] != 0:
            if b[r][c] < 0:
                b[r] = [-x for x in b[r]]
            for i in range(r):
                f = b[i][c] // b[r][c]
                if f:
                    b[i] = [s - f * t for s, t in zip(b[i], b[r])]
            r += 1
            if r == len(b):
                break
    return b


def _sign_normalize(v: list[int]) -> list[int]:
    for x in v:
        if x:
            return v if x > 0 else [-y for y in v]
    return v


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, p, q)`` with ``p a + q b = g = gcd(a, b) > 0``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t
