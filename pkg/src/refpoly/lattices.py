"""All lattices on which a polytope with integer vertex pairing matrix is reflexive.

With ``X = W D U`` the lattices ``M`` between the one generated by the
vertices (coarsest) and the dual of the one generated by the dual vertices
(finest) correspond to factorizations ``D = T S`` with ``T`` and ``S`` upper
triangular with positive diagonal.  Column ``i`` of ``T`` gives the ``i``-th
generator of ``M`` in a basis of the finest lattice, so reducing it modulo
earlier generators makes each entry ``T_ji`` unique in ``[0, T_jj)``.
On ``M`` the vertices of the polytope are the columns of ``S U`` and the
vertices of its dual the rows of ``W T``.
"""
from typing import Iterator, List, NamedTuple

from . import intlin
from .errors import Degenerate
from .polytope import Polytope, hull, vpm


class LatticeRealization(NamedTuple):
    T: List[List[int]]
    S: List[List[int]]
    vertices: List[tuple]  # columns of S U, in the order of P.vertices
    dual_vertices: List[tuple]  # rows of W T, in the order of P.facets
    index: int  # det T, the index of M in the finest lattice

    def polytope(self) -> Polytope:
        return hull(self.vertices)

    def dual_polytope(self) -> Polytope:
        return hull(self.dual_vertices)


def _divisors(m: int) -> List[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def factorizations(diag: List[int]) -> Iterator[tuple]:
    """All ``(T, S)`` with ``T S = diag(diag)`` in the reduced triangular form.

    Columns are filled left to right; within a column the diagonal entry
    runs over divisors in increasing order and off-diagonal entries are
    chosen from the bottom up.
    """
    n = len(diag)
    T = [[0] * n for _ in range(n)]
    S = [[0] * n for _ in range(n)]

    def column(i):
        if i == n:
            yield [r[:] for r in T], [r[:] for r in S]
            return
        for t in _divisors(diag[i]):
            T[i][i] = t
            S[i][i] = diag[i] // t
            yield from upper(i, i - 1)
        T[i][i] = S[i][i] = 0

    def upper(i, j):
        if j < 0:
            yield from column(i + 1)
            return
        # T_ji S_ii + sum_{j<k<i} T_jk S_ki + T_jj S_ji = 0
        partial = sum(T[j][k] * S[k][i] for k in range(j + 1, i))
        for t in range(T[j][j]):
            r = -(t * S[i][i] + partial)
            if r % T[j][j] == 0:
                T[j][i] = t
                S[j][i] = r // T[j][j]
                yield from upper(i, j - 1)
        T[j][i] = S[j][i] = 0

    yield from column(0)


def enumerate_lattices(P: Polytope) -> List[LatticeRealization]:
    """One realization of ``P`` per lattice on which it is reflexive."""
    X = vpm(P)
    dec = intlin.decompose_vpm(X, P.dim)
    out = []
    for T, S in factorizations(dec.diagonal):
        SU = intlin.matmul(S, dec.U)
        WT = intlin.matmul(dec.W, T)
        verts = [tuple(col) for col in zip(*SU)]
        duals = [tuple(row) for row in WT]
        out.append(LatticeRealization(T, S, verts, duals, intlin.det(T)))
    return out


def reflexive_on_lattice(real: LatticeRealization) -> bool:
    try:
        P = real.polytope()
    except Degenerate:
        return False
    if not P.is_reflexive():
        return False
    return set(P.dual().vertices) == set(real.dual_vertices)


def finest_realization(P: Polytope) -> LatticeRealization:
    """Realization on the finest lattice (``T`` = identity)."""
    return next(r for r in enumerate_lattices(P) if r.index == 1)
