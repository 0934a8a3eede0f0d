"""Exact integer linear algebra on plain Python integers.

Matrices are lists of row lists.  Every function accepts any nested sequence
of integers (tuples, numpy object or int arrays) and returns fresh lists, so
callers never see aliasing.  Entries are Python ints, which keeps elimination
exact no matter how large intermediate values grow.
"""
from dataclasses import dataclass
from math import gcd
from typing import List, Sequence

from .errors import RankMismatch

IntMatrix = List[List[int]]


def to_matrix(A) -> IntMatrix:
    return [[int(x) for x in row] for row in A]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(col) for col in zip(*A)]


def matmul(A, B) -> IntMatrix:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def det(A) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    M = to_matrix(A)
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pk - M[i][k] * M[k][j]) // prev
        prev = pk
    return sign * M[n - 1][n - 1]


def vector_gcd(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v) -> List[int]:
    """Divide an integer vector by the gcd of its entries."""
    g = vector_gcd(v)
    if g <= 1:
        return list(v)
    return [x // g for x in v]


def _pick(values):
    """Index of the smallest nonzero absolute value, lowest index on ties."""
    best = None
    for i, x in values:
        if x != 0 and (best is None or abs(x) < best[1]):
            best = (i, abs(x))
    return None if best is None else best[0]


def hnf(A):
    """Row Hermite normal form.

    Returns ``(H, Umod)`` with ``H = Umod A`` and ``Umod`` unimodular.  ``H`` is
    in row echelon form with positive pivots, every entry above a pivot
    reduced into ``[0, pivot)``, and zero rows at the bottom.
    """
    H = to_matrix(A)
    m = len(H)
    n = len(H[0]) if m else 0
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            p = _pick((i, H[i][c]) for i in range(r, m))
            if p is None:
                break
            if p != r:
                H[p], H[r] = H[r], H[p]
                U[p], U[r] = U[r], U[p]
            piv = H[r][c]
            clean = True
            for i in range(r + 1, m):
                x = H[i][c]
                if x:
                    q = x // piv
                    Hi, Hr, Ui, Ur = H[i], H[r], U[i], U[r]
                    for j in range(c, n):
                        Hi[j] -= q * Hr[j]
                    for j in range(m):
                        Ui[j] -= q * Ur[j]
                    if Hi[c]:
                        clean = False
            if clean:
                break
        if r >= m or H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        piv = H[r][c]
        for i in range(r):
            q = H[i][c] // piv
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return H, U


def rank(A) -> int:
    H, _ = hnf(A)
    return sum(1 for row in H if any(row))


def smith(A):
    """Smith normal form with unimodular factors on both sides.

    Returns ``(diag, L, R)`` where ``diag`` lists the nonzero invariant factors
    ``d_1 | d_2 | ...`` and ``A = L * Dpad * R`` with ``Dpad`` the m x n matrix
    carrying ``diag`` on its leading diagonal.  ``L`` and ``R`` are unimodular.
    Pivots are always the smallest nonzero entry in absolute value (lowest
    row, then column, on ties), so the output is deterministic.
    """
    M = to_matrix(A)
    m = len(M)
    n = len(M[0]) if m else 0
    L = identity(m)
    R = identity(n)

    def add_row(i, j, k):  # row_i += k*row_j
        Mi, Mj = M[i], M[j]
        for c in range(n):
            Mi[c] += k * Mj[c]
        for row in L:
            row[j] -= k * row[i]

    def add_col(i, j, k):  # col_j += k*col_i
        for row in M:
            row[j] += k * row[i]
        Ri, Rj = R[i], R[j]
        for c in range(n):
            Ri[c] -= k * Rj[c]

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        for row in L:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        R[i], R[j] = R[j], R[i]

    diag = []
    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                Mi = M[i]
                for j in range(t, n):
                    x = Mi[j]
                    if x and (best is None or abs(x) < best[2]):
                        best = (i, j, abs(x))
            if best is None:
                return diag, L, R
            i, j, _ = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            piv = M[t][t]
            for i in range(t + 1, m):
                if M[i][t]:
                    add_row(i, t, -(M[i][t] // piv))
            for j in range(t + 1, n):
                if M[t][j]:
                    add_col(t, j, -(M[t][j] // piv))
            if any(M[i][t] for i in range(t + 1, m)) or any(M[t][j] for j in range(t + 1, n)):
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(M[i][j] % piv for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            for row in L:
                row[t] = -row[t]
        diag.append(M[t][t])
    return diag, L, R


@dataclass(frozen=True)
class VpmDecomposition:
    """``X = fullW * Dpad * fullU`` with the reduced factors ``X = W D U``.

    ``W`` holds the first ``n`` columns of ``fullW`` and ``U`` the first ``n``
    rows of ``fullU``; ``D`` is the ``n x n`` diagonal of invariant factors.
    """
    W: IntMatrix
    D: IntMatrix
    U: IntMatrix
    fullW: IntMatrix
    fullU: IntMatrix

    @property
    def diagonal(self) -> List[int]:
        return [self.D[i][i] for i in range(len(self.D))]

    @property
    def index(self) -> int:
        p = 1
        for d in self.diagonal:
            p *= d
        return p


def decompose_vpm(X, rank_n: int) -> VpmDecomposition:
    """Factor an integer matrix of rank ``rank_n`` as ``W D U``."""
    diag, L, R = smith(X)
    if len(diag) != rank_n:
        raise RankMismatch(f"matrix has rank {len(diag)}, expected {rank_n}")
    n = rank_n
    D = [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)]
    W = [row[:n] for row in L]
    U = [list(row) for row in R[:n]]
    return VpmDecomposition(W=W, D=D, U=U, fullW=L, fullU=R)


def integer_kernel(A) -> IntMatrix:
    """Saturated basis (rows, in Hermite form) of ``{w : w A = 0}``."""
    H, U = hnf(A)
    rows = [U[i] for i, h in enumerate(H) if not any(h)]
    if not rows:
        return []
    K, _ = hnf(rows)
    return [row for row in K if any(row)]


def right_kernel(A) -> IntMatrix:
    """Saturated basis (rows) of ``{x : A x = 0}``."""
    return integer_kernel(transpose(A))


def solve_left(B, v):
    """Integer ``c`` with ``c B = v`` for full-row-rank ``B``, else None."""
    H, U = hnf(B)
    k = sum(1 for row in H if any(row))
    c = [0] * k
    rest = list(v)
    col = 0
    ncols = len(rest)
    for r in range(k):
        while H[r][col] == 0:
            if rest[col] != 0:
                return None
            col += 1
        q, rem = divmod(rest[col], H[r][col])
        if rem:
            return None
        c[r] = q
        if q:
            rest = [a - q * b for a, b in zip(rest, H[r])]
        col += 1
    if any(rest[j] for j in range(ncols)):
        return None
    full = [0] * len(U)
    for r in range(k):
        if c[r]:
            for j in range(len(U)):
                full[j] += c[r] * U[r][j]
    return full


def inverse_unimodular(A) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    n = len(A)
    H, U = hnf(A)
    if H != identity(n):
        raise ValueError("matrix is not unimodular")
    return U


def saturate(rows) -> IntMatrix:
    """Basis of the saturation of the lattice spanned by ``rows``.

    This is the set of integer vectors in the rational span of ``rows``.
    """
    if not rows:
        return []
    normals = right_kernel(rows)
    if not normals:
        return identity(len(rows[0]))
    return right_kernel(normals)
