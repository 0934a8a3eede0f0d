"""Hodge and Picard numbers of Calabi-Yau hypersurfaces from reflexive pairs.

Both formulas only need lattice-point counts of the polytope, its dual, and
of dual pairs of faces.  A face of dimension ``d`` of ``Delta`` is paired
with the face of ``Delta*`` of dimension ``n - 1 - d`` spanned by the dual
vertices of the facets containing it.
"""
from typing import Dict, List, NamedTuple, Optional

from .errors import NotReflexive, WrongDimension
from .polytope import Polytope


class HodgeData(NamedTuple):
    n: int
    h: List[int]  # h[i - 1] = h_{1i} for i = 1..n-2
    chi: Optional[int]
    picard: Optional[int]

    @property
    def h11(self) -> int:
        return self.h[0]

    @property
    def h12(self) -> int:
        return self.h[1]


def _check(P: Polytope):
    if not P.is_reflexive():
        raise NotReflexive("polytope is not reflexive")


def _interior_by_mask(P: Polytope) -> Dict[int, int]:
    out = {}
    for lst in P.face_lattice().faces.values():
        for f in lst:
            out[f.vertices] = f.l_interior
    return out


def _pair_sum(P: Polytope, dim: int) -> int:
    """Sum of l*(theta) l*(theta dual) over faces theta of P of dimension dim."""
    D = P.dual()
    dual_int = _interior_by_mask(D)
    total = 0
    for f in P.face_lattice().faces[dim]:
        if f.l_interior:
            total += f.l_interior * dual_int[f.facets]
    return total


def _facet_interior_sum(P: Polytope) -> int:
    return sum(f.l_interior for f in P.face_lattice().faces[P.dim - 1])


def picard(Delta: Polytope) -> int:
    """Picard number of the generic K3 hypersurface with Newton polytope Delta."""
    _check(Delta)
    if Delta.dim != 3:
        raise WrongDimension("Picard numbers are computed for three-dimensional polytopes")
    D = Delta.dual()
    # edges of Delta* pair with edges of Delta
    return (len(D.lattice_points()) - 4 - _facet_interior_sum(D) + _pair_sum(D, 1))


def hodge_numbers(Delta: Polytope) -> HodgeData:
    """``h_{1i}`` for ``1 <= i <= n - 2`` of the hypersurface defined by Delta."""
    _check(Delta)
    n = Delta.dim
    if n < 3 or n > 5:
        raise WrongDimension("Hodge numbers are computed for dimensions 3 to 5")
    D = Delta.dual()
    first = len(D.lattice_points()) - n - 1 - _facet_interior_sum(D)
    last = len(Delta.lattice_points()) - n - 1 - _facet_interior_sum(Delta)
    h = []
    for i in range(1, n - 1):
        # faces of Delta* of codimension i + 1, i.e. dimension n - i - 1
        val = _pair_sum(D, n - i - 1)
        if i == 1:
            val += first
        if i == n - 2:
            val += last
        h.append(val)
    chi = 2 * (h[0] - h[1]) if n == 4 else None
    pic = None
    if n == 3:
        if h[0] != 20:
            raise ArithmeticError(f"K3 formula gave h11 = {h[0]}")
        pic = picard(Delta)
    return HodgeData(n, h, chi, pic)


def mirror_check(Delta: Polytope) -> bool:
    """Hodge numbers of Delta and its dual agree under ``h_{1i} <-> h_{1,n-1-i}``."""
    a = hodge_numbers(Delta).h
    b = hodge_numbers(Delta.dual()).h
    return a == b[::-1]


def k3_edge_correction(Delta: Polytope) -> int:
    """Sum over edges of ``l*(edge) l*(dual edge)``."""
    _check(Delta)
    return _pair_sum(Delta, 1)
