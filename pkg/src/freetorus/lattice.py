"""Exact integer linear algebra: contents, Smith normal form, basis extension.

All arithmetic is done on Python ints (arbitrary precision); nothing here may
be replaced by fixed-width machine arithmetic.  Matrices are plain tuples of
tuples of ints, vectors plain tuples of ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

IntVec = tuple[int, ...]
IntMat = tuple[IntVec, ...]


def as_vec(entries) -> IntVec:
    return tuple(int(x) for x in entries)


def as_mat(rows) -> IntMat:
    mat = tuple(tuple(int(x) for x in row) for row in rows)
    if mat:
        width = len(mat[0])
        if any(len(row) != width for row in mat):
            raise ValueError("matrix rows must all have the same length")
    return mat


def content(v: IntVec) -> int:
    """gcd of the entries of v; 0 for the zero (or empty) vector.

    This is the divisibility of the class with coordinates v in a free
    abelian group: the largest d with v = d*x, with content(0) = 0.
    """
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return g


def is_primitive(v: IntVec) -> bool:
    """True iff the class with coordinates v has divisibility exactly 1."""
    return content(v) == 1


@dataclass(frozen=True)
class SNFDecomposition:
    """Unimodular factorization U @ A @ V = D.

    U is k x k, V is n x n, both of determinant +-1; D is k x n, zero off
    the diagonal, with nonnegative diagonal d_1 | d_2 | ... | d_min.
    """

    U: IntMat
    D: IntMat
    V: IntMat

    @property
    def diagonal(self) -> IntVec:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)))


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(A: IntMat) -> SNFDecomposition:
    """Smith normal form over Z with transformation matrices.

    Pivot selection: smallest absolute value among the nonzero entries of the
    remaining submatrix, ties broken row-major, so the decomposition is
    reproducible.  Row operations accumulate in U, column operations in V.
    """
    A = as_mat(A)
    k = len(A)
    n = len(A[0]) if k else 0
    D = [list(row) for row in A]
    U = _identity(k)
    V = _identity(n)

    def swap_rows(i, j):
        if i != j:
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in D:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row dst += c * row src
        D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in D:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    for t in range(min(k, n)):
        while True:
            # Smallest-|entry| nonzero pivot in the trailing submatrix.
            pivot = None
            for i in range(t, k):
                for j in range(t, n):
                    if D[i][j] != 0 and (pivot is None or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = D[t][t]

            dirty = False
            for i in range(t + 1, k):
                if D[i][t] != 0:
                    q = D[i][t] // p
                    add_row(i, t, -q)
                    if D[i][t] != 0:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j] != 0:
                    q = D[t][j] // p
                    add_col(j, t, -q)
                    if D[t][j] != 0:
                        dirty = True
            if dirty:
                continue

            # Pivot divides its cleared row and column; enforce that it also
            # divides the rest of the submatrix (divisibility chain).
            bad = None
            for i in range(t + 1, k):
                for j in range(t + 1, n):
                    if D[i][j] % p != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)

    # Nonnegative diagonal.
    for t in range(min(k, n)):
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]

    return SNFDecomposition(U=as_mat(U), D=as_mat(D), V=as_mat(V))


def mat_mul(A: IntMat, B: IntMat) -> IntMat:
    if A and B and len(A[0]) != len(B):
        raise ValueError("dimension mismatch")
    inner = len(B)
    cols = len(B[0]) if B else 0
    return tuple(
        tuple(sum(row[s] * B[s][j] for s in range(inner)) for j in range(cols))
        for row in A
    )


def det(A: IntMat) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    if any(len(row) != n for row in A):
        raise ValueError("determinant of a non-square matrix")
    M = [list(row) for row in A]
    sign = 1
    prev = 1
    for t in range(n - 1):
        if M[t][t] == 0:
            for i in range(t + 1, n):
                if M[i][t] != 0:
                    M[t], M[i] = M[i], M[t]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                M[i][j] = (M[i][j] * M[t][t] - M[i][t] * M[t][j]) // prev
            M[i][t] = 0
        prev = M[t][t]
    return sign * M[n - 1][n - 1]


def extends_to_basis(A: IntMat) -> bool:
    """True iff the rows of A extend to a basis of Z^cols.

    Equivalent to the Smith diagonal being (1,...,1) with full row rank; this
    is the simply-connectedness criterion for a torus-bundle total space.
    """
    A = as_mat(A)
    k = len(A)
    n = len(A[0]) if k else 0
    if k > n:
        raise ValueError("more rows than columns: no basis extension possible")
    if k == 0:
        return True
    diag = smith_normal_form(A).diagonal
    return len(diag) == k and all(d == 1 for d in diag)


def cokernel(A: IntMat) -> tuple[int, tuple[int, ...]]:
    """Cokernel of A as a map Z^cols -> Z^rows: (free rank, torsion factors).

    Torsion factors are the Smith diagonal entries > 1, in divisibility order.
    """
    A = as_mat(A)
    k = len(A)
    if k == 0:
        return 0, ()
    diag = smith_normal_form(A).diagonal
    nonzero = [d for d in diag if d != 0]
    free = k - len(nonzero)
    torsion = tuple(d for d in nonzero if d > 1)
    return free, torsion


def gf2_in_span(w: IntVec, rows: IntMat) -> bool:
    """Whether w mod 2 lies in the GF(2) row span of rows mod 2."""
    rows = as_mat(rows)
    w = as_vec(w)
    if rows and len(w) != len(rows[0]):
        raise ValueError("length of w must equal the number of columns")
    target = [x & 1 for x in w]
    basis: list[list[int]] = []
    for row in rows:
        cur = [x & 1 for x in row]
        for b in basis:
            lead = next(i for i, x in enumerate(b) if x)
            if cur[lead]:
                cur = [a ^ c for a, c in zip(cur, b)]
        if any(cur):
            basis.append(cur)
    for b in basis:
        lead = next(i for i, x in enumerate(b) if x)
        if target[lead]:
            target = [a ^ c for a, c in zip(target, b)]
    return not any(target)
