"""Exact integer/rational linear algebra: fraction-free elimination.

Used by the modular-polynomial generator (nullspace of q-expansion
systems) and by the Hecke sieve (exact eigenspace kernels).  Entries grow
like minors, so everything runs on gmpy2 integers; solutions come back as
Fractions.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2

_mpz = gmpy2.mpz


def nullspace_int(rows: list[list[int]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel over Q of an integer matrix.

    Fraction-free (Bareiss) forward elimination followed by rational
    back-substitution, one basis vector per free column.
    """
    m = len(rows)
    M = [[_mpz(x) for x in row] for row in rows]
    pivots: list[tuple[int, int]] = []  # (row, col) in elimination order
    prev = _mpz(1)
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        best = -1
        for i in range(r, m):
            if M[i][c]:
                if best < 0 or abs(M[i][c]) < abs(M[best][c]):
                    best = i
        if best < 0:
            continue
        if best != r:
            M[r], M[best] = M[best], M[r]
        piv = M[r][c]
        for i in range(r + 1, m):
            mic = M[i][c]
            row_i = M[i]
            row_r = M[r]
            if mic:
                for j in range(c + 1, ncols):
                    row_i[j] = (piv * row_i[j] - mic * row_r[j]) // prev
                row_i[c] = _mpz(0)
            else:
                # Zero-leading rows still pick up the minor rescaling.
                for j in range(c + 1, ncols):
                    row_i[j] = (piv * row_i[j]) // prev
        pivots.append((r, c))
        prev = piv
        r += 1
    pivot_cols = [c for _, c in pivots]
    free_cols = [c for c in range(ncols) if c not in set(pivot_cols)]
    basis = []
    for cf in free_cols:
        x = [Fraction(0)] * ncols
        x[cf] = Fraction(1)
        for pr, pc in reversed(pivots):
            s = Fraction(0)
            row = M[pr]
            for j in range(pc + 1, ncols):
                if row[j] and x[j]:
                    s += Fraction(int(row[j])) * x[j]
            x[pc] = -s / Fraction(int(row[pc]))
        basis.append(x)
    return basis


def kernel_rational(matrix: list[list[Fraction]]) -> list[list[Fraction]]:
    """Right kernel of a matrix with Fraction entries (clears denominators)."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    rows = []
    for row in matrix:
        den = 1
        for x in row:
            den = den * x.denominator // gcd_int(den, x.denominator)
        rows.append([int(x * den) for x in row])
    return nullspace_int(rows, ncols)


def gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def mat_mul_int(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    n, k, m = len(a), len(b), len(b[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out
