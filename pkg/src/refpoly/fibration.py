"""Toric fibrations read off from reflexive sections and projections.

A fibration of the hypersurface corresponds to a sublattice ``N_fib`` of
``N`` such that ``Delta* ∩ N_fib`` is reflexive.  Dually, ``Delta`` projects
onto a reflexive polytope in ``M_fib = M / M_bas``, and the projection of a
polytope is dual to the section of its dual.  We test the projection side:
it only needs the vertices of ``Delta``, which are lattice points even when
``Delta*`` is not a lattice polytope.

The base is the quotient ``N_bas = N / N_fib``.  Every lattice point of
``Delta*`` outside the fiber maps to a positive multiple ``r`` of a primitive
ray of the base fan.
"""
from itertools import combinations
from math import gcd
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from . import intlin
from .errors import Degenerate, InvalidSubsystem
from .polytope import Polytope, hull
from .weights import WeightSystem, as_cws, delta_of_q, embedding


class FibrationData(NamedTuple):
    fiber_dim: int
    fiber_subspace: List[List[int]]  # saturated basis of N_fib, as rows
    fiber: Polytope  # Delta* ∩ N_fib in fiber_subspace coordinates
    base_rays: List[Tuple[int, ...]]
    multiplicities: Dict[Tuple[int, ...], Tuple[int, int]]  # v -> (ray index, r)
    quotient: List[List[int]]  # rows of the projection N -> N_bas
    fiber_weights: Optional[WeightSystem] = None

    @property
    def reducible_rays(self) -> List[int]:
        """Base rays whose preimage holds more than one lattice point."""
        counts = {}
        for j, _ in self.multiplicities.values():
            counts[j] = counts.get(j, 0) + 1
        return sorted(j for j, c in counts.items() if c > 1)

    def image_of_delta(self, Delta: Polytope) -> Polytope:
        """Projection of Delta onto ``M_fib``; dual to :attr:`fiber`."""
        return _project(Delta, self.fiber_subspace)


class WeightPartition(NamedTuple):
    l: int
    y: Tuple[int, ...]  # y[l] = -1, others >= 0, sum_i y_i n_i = 0


# --------------------------------------------------------------------------
# sections


def _project(Delta: Polytope, basis) -> Polytope:
    return hull([tuple(intlin.dot(b, x) for b in basis) for x in Delta.vertices])


def _subspace_key(basis) -> tuple:
    H, _ = intlin.hnf(basis)
    return tuple(tuple(r) for r in H if any(r))


def _fiber_basis(points) -> List[List[int]]:
    basis = intlin.saturate([list(p) for p in points])
    H, _ = intlin.hnf(basis)
    return [r for r in H if any(r)]


def _reflexive_projection(Delta: Polytope, basis) -> Optional[Polytope]:
    if not Delta.is_lattice:
        return None
    try:
        image = _project(Delta, basis)
    except Degenerate:
        return None
    return image if image.is_reflexive() else None


def _simplex_weights(P: Polytope) -> Optional[WeightSystem]:
    """Weights of the positive relation among the vertices of a simplex."""
    if len(P.vertices) != P.dim + 1:
        return None
    ker = intlin.integer_kernel([list(v) for v in P.vertices])
    if len(ker) != 1:
        return None
    w = ker[0]
    if all(x < 0 for x in w):
        w = [-x for x in w]
    if not all(x > 0 for x in w):
        return None
    return WeightSystem(w)


def base_projection(DeltaStar: Polytope, fiber_subspace) -> Tuple[list, dict, list]:
    """Base rays, multiplicities and the quotient map ``N -> N_bas``."""
    basis = _fiber_basis(fiber_subspace)
    Q = intlin.right_kernel(basis)
    rays = {}
    images = {}
    for v in DeltaStar.lattice_points():
        w = tuple(intlin.dot(q, v) for q in Q)
        if not any(w):
            continue
        r = intlin.vector_gcd(w)
        ray = tuple(x // r for x in w)
        rays.setdefault(ray, None)
        images[v] = (ray, r)
    ray_list = sorted(rays)
    index = {ray: j for j, ray in enumerate(ray_list)}
    mult = {v: (index[ray], r) for v, (ray, r) in images.items()}
    return ray_list, mult, Q


def _fibration(DeltaStar: Polytope, basis, image: Polytope) -> FibrationData:
    fiber = image.dual()
    rays, mult, Q = base_projection(DeltaStar, basis)
    return FibrationData(len(basis), basis, fiber, rays, mult, Q, _simplex_weights(fiber))


def _candidate_points(DeltaStar: Polytope, max_face_dim: int) -> List[tuple]:
    """Lattice points on faces of dimension at most ``max_face_dim``.

    A section by a subspace of codimension ``c`` has its vertices on faces of
    dimension at most ``c``, and a reflexive section is spanned by its
    vertices, so these points suffice to generate every candidate subspace.
    """
    dims = {}
    for d, faces in DeltaStar.face_lattice().faces.items():
        for f in faces:
            dims[f.facets] = d
    out = []
    for p in DeltaStar.lattice_points():
        t = 0
        for i, f in enumerate(DeltaStar.facets):
            if f.value(p) == 0:
                t |= 1 << i
        if t and dims.get(t, DeltaStar.dim) <= max_face_dim:
            out.append(p)
    return out


def reflexive_sections(DeltaStar: Polytope, fiber_dim: int) -> List[FibrationData]:
    """All reflexive sections of ``DeltaStar`` of dimension ``fiber_dim``."""
    n = DeltaStar.dim
    if not 1 <= fiber_dim < n:
        return []
    Delta = DeltaStar.dual()
    pts = _candidate_points(DeltaStar, n - fiber_dim)
    seen = set()
    out = []
    for combo in combinations(pts, fiber_dim):
        if intlin.rank([list(p) for p in combo]) < fiber_dim:
            continue
        basis = _fiber_basis(combo)
        key = _subspace_key(basis)
        if key in seen:
            continue
        seen.add(key)
        image = _reflexive_projection(Delta, basis)
        if image is not None:
            out.append(_fibration(DeltaStar, basis, image))
    out.sort(key=lambda f: _subspace_key(f.fiber_subspace))
    return out


def count_reflexive_projections(q) -> int:
    """Reflexive projections of ``Delta(q)`` along lines (sections of
    codimension one of the dual)."""
    Delta = delta_of_q(q)
    return len(reflexive_sections(Delta.dual(), Delta.dim - 1))


# --------------------------------------------------------------------------
# combined weight systems


def cws_fibration(q, fiber_systems: Sequence[int]) -> Optional[FibrationData]:
    """Fibration whose fiber is spanned by the ``V_i`` of a sub-CWS.

    Returns None when the section is not reflexive or has dimension below 2.
    """
    q = as_cws(q)
    sel = sorted(set(fiber_systems))
    if not sel or len(sel) != len(fiber_systems) or sel[0] < 0 or sel[-1] >= len(q.systems):
        raise InvalidSubsystem(f"bad system indices {list(fiber_systems)}")
    support = [i for i in range(q.k) if any(q.systems[j][i] for j in sel)]
    emb = embedding(q)
    V = emb.vertices_nabla()
    span_dim = intlin.rank([list(V[i]) for i in support])
    sub_rank = intlin.rank([[q.systems[j][i] for i in support] for j in sel])
    if span_dim != len(support) - sub_rank:
        raise InvalidSubsystem("the selected systems miss relations among their vertices")
    if span_dim >= q.dim:
        raise InvalidSubsystem("the selected systems span the whole lattice")
    if span_dim < 2:
        return None
    Delta = delta_of_q(q)
    if not Delta.has_ip():
        raise InvalidSubsystem("the combined weight system has no interior point")
    basis = _fiber_basis([V[i] for i in support])
    image = _reflexive_projection(Delta, basis)
    if image is None:
        if span_dim == 2:
            raise ArithmeticError("a two-dimensional section failed to be reflexive")
        return None
    return _fibration(Delta.dual(), basis, image)


# --------------------------------------------------------------------------
# projections onto facets


def weight_partitions(weights: Sequence[int], l: int) -> List[Tuple[int, ...]]:
    """All ``y`` with ``y_l = -1``, ``y_i >= 0`` and ``sum_i y_i n_i = 0``."""
    k = len(weights)
    others = [i for i in range(k) if i != l]
    out = []
    y = [0] * k
    y[l] = -1

    def rec(t, rest):
        if t == len(others):
            if rest == 0:
                out.append(tuple(y))
            return
        i = others[t]
        for v in range(rest // weights[i] + 1):
            y[i] = v
            rec(t + 1, rest - v * weights[i])
        y[i] = 0

    rec(0, weights[l])
    return out


def unique_partitions(ws) -> List[WeightPartition]:
    """Indices whose weight has exactly one partition by the others."""
    w = as_cws(ws).systems[0]
    out = []
    for l in range(len(w)):
        parts = weight_partitions(w, l)
        if len(parts) == 1:
            out.append(WeightPartition(l, parts[0]))
    return out


def _facet_projection_image(ws, part: WeightPartition) -> Optional[Polytope]:
    Delta = delta_of_q(ws)
    c = embedding(ws).to_c(part.y)
    return _reflexive_projection(Delta, intlin.right_kernel([list(c)]))


def facet_projection(ws, part: WeightPartition) -> Optional[WeightSystem]:
    """Fiber weights of the projection of ``Delta`` onto the facet
    ``x_l = -1`` along ``y``, or None if that facet is not reflexive.

    The fiber is spanned by ``V_i + y_i V_l`` for ``i != l``, which satisfy
    the relation with the original weights.  Each generator is divided by
    the gcd of its pairings with ``M`` and its weight multiplied accordingly.
    """
    if _facet_projection_image(ws, part) is None:
        return None
    w = as_cws(ws).systems[0]
    B = embedding(ws).B
    l, y = part.l, part.y
    fiber = []
    for i in range(len(w)):
        if i == l:
            continue
        g = 0
        for row in B:
            g = gcd(g, row[i] + y[i] * row[l])
        fiber.append(w[i] * g)
    return WeightSystem(fiber)


def reflexive_facet_projections(ws) -> List[WeightPartition]:
    """Unique partitions whose facet is reflexive, one per projection line."""
    seen = set()
    out = []
    for part in unique_partitions(ws):
        line = min(part.y, tuple(-x for x in part.y))
        if line in seen:
            continue
        if _facet_projection_image(ws, part) is not None:
            seen.add(line)
            out.append(part)
    return out


def count_facet_projections(ws) -> int:
    return len(reflexive_facet_projections(ws))
