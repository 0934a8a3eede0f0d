"""Exact lattice polytopes: hulls, duality, lattice points, faces, normal forms.

Every computation here is exact.  Facets are stored as primitive inward
normals ``u`` with offsets ``c`` so that the polytope is
``{x : <u, x> + c >= 0}``; for a polytope with the origin in its interior all
offsets are positive and the polytope is reflexive exactly when they all
equal 1.

The dual of a polytope keeps a fixed correspondence: ``dual(P).vertices[i]``
comes from ``P.facets[i]`` and ``dual(P).facets[j]`` from ``P.vertices[j]``.
"""
from fractions import Fraction
from math import gcd
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from . import intlin
from .errors import Degenerate, NoInteriorOrigin, NonIntegerVPM, NotReflexivePair

Point = Tuple[int, ...]

# Bounding boxes up to this many cells are scanned with numpy; larger ones go
# through exact projections.
_BOX_LIMIT = 200_000


class Facet(NamedTuple):
    normal: Tuple[int, ...]
    offset: object  # int for lattice polytopes, Fraction otherwise

    def value(self, x) -> object:
        return sum(a * b for a, b in zip(self.normal, x)) + self.offset


def _popcount(x: int) -> int:
    return bin(x).count("1")


# --------------------------------------------------------------------------
# hull


def _hyperplane_through(points: Sequence[Point], inside: Point):
    """Homogeneous ``(c, u)`` vanishing on ``points`` and positive at ``inside``."""
    rows = [(1,) + tuple(p) for p in points]
    ker = intlin.right_kernel(rows)
    h = ker[0]
    val = h[0] + intlin.dot(h[1:], inside)
    if val < 0:
        h = [-x for x in h]
    return tuple(h)


def _affine_basis(points: List[Point]) -> List[int]:
    """Indices of a maximal affinely independent subset (greedy, spread out)."""
    dim = len(points[0])
    chosen = [0]
    base = points[0]
    echelon = []  # (pivot column, row) in fraction-free form

    def reduce(v):
        v = list(v)
        for col, row in echelon:
            if v[col]:
                a, b = row[col], v[col]
                v = [a * x - b * y for x, y in zip(v, row)]
        return v

    # try the points farthest from the first one first, which tends to give a
    # large initial simplex and fewer intermediate facets
    order = sorted(range(1, len(points)),
                   key=lambda i: -sum((a - b) ** 2 for a, b in zip(points[i], base)))
    for i in order:
        v = reduce([a - b for a, b in zip(points[i], base)])
        nz = next((c for c, x in enumerate(v) if x), None)
        if nz is None:
            continue
        g = intlin.vector_gcd(v)
        echelon.append((nz, [x // g for x in v]))
        chosen.append(i)
        if len(chosen) == dim + 1:
            break
    return chosen


def _hull_facets(points: List[Point]):
    """Beneath-beyond hull.  Returns (vertex list, homogeneous facet list)."""
    dim = len(points[0])
    simplex = _affine_basis(points)
    if len(simplex) < dim + 1:
        raise Degenerate(len(simplex) - 1, dim)
    pts = [points[i] for i in simplex]
    sset = set(simplex)
    rest = [p for i, p in enumerate(points) if i not in sset]
    facets = []  # [h, incidence bitmask over indices into pts]
    for j in range(dim + 1):
        others = [pts[i] for i in range(dim + 1) if i != j]
        h = _hyperplane_through(others, pts[j])
        mask = ((1 << (dim + 1)) - 1) ^ (1 << j)
        facets.append((h, mask))

    for p in rest:
        vals = [h[0] + sum(a * b for a, b in zip(h[1:], p)) for h, _ in facets]
        if min(vals) >= 0:
            continue
        t = len(pts)
        pts.append(p)
        bit = 1 << t
        neg = [i for i, v in enumerate(vals) if v < 0]
        pos = [i for i, v in enumerate(vals) if v > 0]
        new = []
        for i in neg:
            hi, mi = facets[i]
            vi = vals[i]
            for j in pos:
                hj, mj = facets[j]
                z = mi & mj
                if _popcount(z) < dim - 1:
                    continue
                if any((m & z) == z for k, (_, m) in enumerate(facets) if k != i and k != j):
                    continue
                vj = vals[j]
                h = [vj * a - vi * b for a, b in zip(hi, hj)]
                g = intlin.vector_gcd(h)
                new.append((tuple(x // g for x in h), z | bit))
        kept = []
        for i, (h, m) in enumerate(facets):
            if vals[i] > 0:
                kept.append((h, m))
            elif vals[i] == 0:
                kept.append((h, m | bit))
        facets = kept + new

    # vertices: processed points that are the sole common point of the facets
    # containing them
    full = (1 << len(pts)) - 1
    vertices = []
    for t in range(len(pts)):
        bit = 1 << t
        common = full
        hit = False
        for _, m in facets:
            if m & bit:
                common &= m
                hit = True
        if hit and common == bit:
            vertices.append(pts[t])
    return vertices, [h for h, _ in facets]


def _normalize_facet(h, vertices) -> Facet:
    c, u = h[0], h[1:]
    g = intlin.vector_gcd(u)
    if g != 1:
        u = tuple(x // g for x in u)
        if c % g == 0:
            c //= g
        else:
            c = Fraction(c, g)
    return Facet(tuple(u), c)


class Polytope:
    """A full-dimensional polytope given by its vertices and facets.

    Vertices are integer tuples for lattice polytopes; the transient rational
    duals produced by :func:`dual` hold ``Fraction`` coordinates.  Instances
    are treated as immutable; derived data is cached on first use.
    """

    __slots__ = ("dim", "vertices", "facets", "_cache")

    def __init__(self, vertices, facets):
        self.vertices = tuple(tuple(v) for v in vertices)
        self.facets = tuple(facets)
        self.dim = len(self.vertices[0])
        self._cache = {}

    def __repr__(self):
        return f"Polytope(dim={self.dim}, vertices={list(self.vertices)})"

    def __eq__(self, other):
        return isinstance(other, Polytope) and set(self.vertices) == set(other.vertices)

    def __hash__(self):
        return hash(frozenset(self.vertices))

    @property
    def is_lattice(self) -> bool:
        return all(type(x) is int for v in self.vertices for x in v)

    def _cached(self, key, fn):
        try:
            return self._cache[key]
        except KeyError:
            val = self._cache[key] = fn()
            return val

    def facet_matrix(self):
        """Arrays ``(A, c)`` with the polytope equal to ``{x : A x + c >= 0}``."""
        def build():
            A = np.array([f.normal for f in self.facets], dtype=np.int64)
            c = np.array([f.offset for f in self.facets], dtype=np.int64)
            return A, c
        return self._cached("facet_matrix", build)

    def contains(self, x) -> bool:
        return all(f.value(x) >= 0 for f in self.facets)

    def has_ip(self) -> bool:
        return all(f.offset > 0 for f in self.facets)

    def is_reflexive(self) -> bool:
        return self.is_lattice and all(f.offset == 1 for f in self.facets)

    def dual(self) -> "Polytope":
        return self._cached("dual", lambda: dual(self))

    def lattice_points(self) -> List[Point]:
        return self._cached("points", lambda: _lattice_points(self))

    def interior_points(self) -> List[Point]:
        return [p for p in self.lattice_points() if all(f.value(p) > 0 for f in self.facets)]

    def boundary_points(self) -> List[Point]:
        return [p for p in self.lattice_points() if any(f.value(p) == 0 for f in self.facets)]

    def vertex_facet_masks(self):
        """Per facet, the bitmask of incident vertices."""
        def build():
            out = []
            for f in self.facets:
                m = 0
                for j, v in enumerate(self.vertices):
                    if f.value(v) == 0:
                        m |= 1 << j
                out.append(m)
            return out
        return self._cached("incidence", build)

    def pairing_matrix(self) -> List[List[int]]:
        """``<u_i, v_j> + c_i`` over facets ``i`` and vertices ``j`` (all >= 0)."""
        return self._cached("pm", lambda: [[f.value(v) for v in self.vertices] for f in self.facets])

    def transform(self, A) -> "Polytope":
        """Image under ``x -> A x``."""
        A = intlin.to_matrix(A)
        return hull([tuple(intlin.dot(row, v) for row in A) for v in self.vertices])

    def face_lattice(self) -> "FaceLattice":
        return self._cached("faces", lambda: FaceLattice(self))

    def normal_form(self) -> "NormalForm":
        return self._cached("nf", lambda: _normal_form(self))


def hull(points) -> Polytope:
    """Convex hull of integer points (exact); raises Degenerate if flat."""
    pts = sorted({tuple(int(x) for x in p) for p in points})
    if not pts:
        raise ValueError("empty point set")
    dim = len(pts[0])
    if dim == 1:
        lo, hi = pts[0], pts[-1]
        if lo == hi:
            raise Degenerate(0, 1)
        return Polytope([lo, hi], [Facet((1,), -lo[0]), Facet((-1,), hi[0])])
    vertices, hs = _hull_facets(pts)
    vertices.sort()
    facets = sorted(_normalize_facet(h, vertices) for h in hs)
    return Polytope(vertices, facets)


def rational_hull(points) -> Polytope:
    """Hull of points with rational coordinates (scaled to integers)."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    den = 1
    for p in pts:
        for x in p:
            den = den * x.denominator // gcd(den, x.denominator)
    P = hull([tuple(int(x * den) for x in p) for p in pts])
    verts = [tuple(_simplify(Fraction(x, den)) for x in v) for v in P.vertices]
    facets = [Facet(f.normal, _simplify(Fraction(f.offset, den))) for f in P.facets]
    return Polytope(verts, facets)


def _simplify(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def affine_dimension(points) -> int:
    pts = [tuple(p) for p in points]
    if len(pts) <= 1:
        return 0
    base = pts[0]
    return intlin.rank([[a - b for a, b in zip(p, base)] for p in pts[1:]])


# --------------------------------------------------------------------------
# duality


def dual(P: Polytope) -> Polytope:
    """Polar dual ``{y : <y, x> >= -1 for all x in P}``."""
    if not P.has_ip():
        raise NoInteriorOrigin("origin is not in the interior")
    verts = []
    for f in P.facets:
        c = f.offset
        verts.append(tuple(_simplify(Fraction(a) / c) for a in f.normal))
    facets = []
    for v in P.vertices:
        den = 1
        for x in v:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        w = [int(x * den) for x in v]
        g = intlin.vector_gcd(w)
        facets.append(Facet(tuple(x // g for x in w), _simplify(Fraction(den, g))))
    D = Polytope(verts, facets)
    D._cache["dual"] = P
    return D


def is_reflexive(P: Polytope) -> bool:
    return P.is_reflexive()


def has_ip(P) -> bool:
    """Origin strictly interior.  Accepts a Polytope or a list of points."""
    if isinstance(P, Polytope):
        return P.has_ip()
    try:
        return hull(P).has_ip()
    except Degenerate:
        return False


def vpm(P: Polytope) -> List[List[int]]:
    """Vertex pairing matrix ``<dual vertex i, vertex j>``."""
    if not P.has_ip():
        raise NoInteriorOrigin("origin is not in the interior")
    out = []
    for f in P.facets:
        c = f.offset
        row = []
        for v in P.vertices:
            s = sum(a * b for a, b in zip(f.normal, v))
            q, r = divmod(s, c) if type(c) is int else (None, 1)
            if r:
                s = Fraction(s) / c
                if s.denominator != 1:
                    raise NonIntegerVPM("vertex pairing is not integral")
                q = int(s)
            row.append(q)
        out.append(row)
    return out


def has_integer_vpm(P: Polytope) -> bool:
    try:
        vpm(P)
        return True
    except (NonIntegerVPM, NoInteriorOrigin):
        return False


# --------------------------------------------------------------------------
# lattice points


def _ceil_div(a, b):
    return -((-a) // b)


def _rational_lattice_points(P: Polytope) -> List[Point]:
    """Lattice points of a polytope with rational vertices, one slice of the
    first coordinate at a time."""
    lo = [min(v[i] for v in P.vertices) for i in range(P.dim)]
    hi = [max(v[i] for v in P.vertices) for i in range(P.dim)]
    lo = [_ceil_div(Fraction(x).numerator, Fraction(x).denominator) for x in lo]
    hi = [Fraction(x).numerator // Fraction(x).denominator for x in hi]
    if any(a > b for a, b in zip(lo, hi)):
        return []
    # for integer x, <u, x> >= -c is the same as <u, x> >= -floor(c)
    A = np.array([f.normal for f in P.facets], dtype=np.int64)
    c = np.array([Fraction(f.offset).numerator // Fraction(f.offset).denominator
                  for f in P.facets], dtype=np.int64)
    rest = [np.arange(a, b + 1) for a, b in zip(lo[1:], hi[1:])]
    if rest:
        grids = np.meshgrid(*rest, indexing="ij")
        tail = np.stack([g.ravel() for g in grids])
    else:
        tail = np.zeros((0, 1), dtype=np.int64)
    out = []
    for x0 in range(lo[0], hi[0] + 1):
        X = np.vstack([np.full((1, tail.shape[1]), x0), tail])
        ok = np.all(A @ X + c[:, None] >= 0, axis=0)
        out.extend(tuple(int(x) for x in row) for row in X[:, ok].T)
    return out


def _lattice_points(P: Polytope) -> List[Point]:
    if not P.is_lattice:
        return _rational_lattice_points(P)
    n = P.dim
    V = np.array(P.vertices, dtype=np.int64)
    lo = V.min(axis=0)
    hi = V.max(axis=0)
    cells = int(np.prod(hi - lo + 1))
    if cells <= _BOX_LIMIT:
        grids = np.meshgrid(*[np.arange(a, b + 1) for a, b in zip(lo, hi)], indexing="ij")
        X = np.stack([g.ravel() for g in grids])
        A, c = P.facet_matrix()
        ok = np.all(A @ X + c[:, None] >= 0, axis=0)
        pts = X[:, ok].T
        return [tuple(int(x) for x in row) for row in pts]
    # exact projections onto leading coordinates bound each coordinate given
    # the previous ones
    levels = []
    for j in range(2, n):
        proj = hull([v[:j] for v in P.vertices])
        levels.append([(f.normal, f.offset) for f in proj.facets])
    levels.append([(f.normal, f.offset) for f in P.facets])
    out = []

    def rec(prefix, j):
        if j == n:
            out.append(tuple(prefix))
            return
        lower, upper = None, None
        if j == 0:
            lower, upper = int(lo[0]), int(hi[0])
        else:
            for u, c in levels[j - 1]:
                a = u[j]
                r = -c - sum(x * y for x, y in zip(u, prefix))
                if a > 0:
                    b = _ceil_div(r, a)
                    lower = b if lower is None else max(lower, b)
                elif a < 0:
                    b = r // a
                    upper = b if upper is None else min(upper, b)
                elif r > 0:
                    return
        for x in range(lower, upper + 1):
            prefix.append(x)
            rec(prefix, j + 1)
            prefix.pop()

    rec([], 0)
    return out


def lattice_points(P: Polytope) -> List[Point]:
    return P.lattice_points()


# --------------------------------------------------------------------------
# faces


class Face(NamedTuple):
    dim: int
    vertices: int  # bitmask over P.vertices
    facets: int  # bitmask over P.facets
    l: int
    l_interior: int


class FaceLattice:
    """All proper faces of a polytope with lattice-point counts.

    ``faces[d]`` lists the faces of dimension ``d``.  For lattice polytopes
    ``l`` counts lattice points of the face and ``l_interior`` those in its
    relative interior.  The dual of a face with facet mask ``F`` is the face
    of the dual polytope whose vertex mask is ``F``.
    """

    def __init__(self, P: Polytope):
        self.polytope = P
        n = P.dim
        masks = P.vertex_facet_masks()
        nf = len(masks)
        levels = {n - 1: sorted(set(masks))}
        for d in range(n - 2, -1, -1):
            found = set()
            for F in levels[d + 1]:
                cands = {F & G for G in masks if (F & G) != F and F & G}
                for c in cands:
                    if not any(c != o and (c & o) == c for o in cands):
                        found.add(c)
            levels[d] = sorted(found)
        self._facet_sets = {}
        for d, lst in levels.items():
            for vm in lst:
                fm = 0
                for i, m in enumerate(masks):
                    if (m & vm) == vm:
                        fm |= 1 << i
                self._facet_sets[vm] = fm
        counts_l = {}
        counts_int = {}
        tight_count = {}
        for p in P.lattice_points():
            t = 0
            for i, f in enumerate(P.facets):
                if f.value(p) == 0:
                    t |= 1 << i
            if t:
                tight_count[t] = tight_count.get(t, 0) + 1
        for vm, fm in self._facet_sets.items():
            counts_int[vm] = tight_count.get(fm, 0)
            counts_l[vm] = sum(c for t, c in tight_count.items() if (t & fm) == fm)
        self.faces = {}
        for d, lst in levels.items():
            self.faces[d] = [Face(d, vm, self._facet_sets[vm], counts_l.get(vm, 0),
                                  counts_int.get(vm, 0)) for vm in lst]
        self.nfacets = nf

    def f_vector(self) -> List[int]:
        return [len(self.faces[d]) for d in range(self.polytope.dim)]

    def euler_ok(self) -> bool:
        n = self.polytope.dim
        s = sum((-1) ** d * len(self.faces[d]) for d in range(n))
        return s == 1 - (-1) ** n

    def by_vertices(self, vmask: int) -> Face:
        for lst in self.faces.values():
            for f in lst:
                if f.vertices == vmask:
                    return f
        raise KeyError(vmask)

    def dual_face(self, face: Face, dual_lattice: "FaceLattice") -> Face:
        return dual_lattice.by_vertices(face.facets)


def face_lattice(P: Polytope) -> FaceLattice:
    return P.face_lattice()


# --------------------------------------------------------------------------
# normal form and symmetries


class NormalForm(NamedTuple):
    matrix: Tuple[Tuple[int, ...], ...]  # n rows, one column per vertex
    key: bytes

    def polytope(self) -> Polytope:
        return hull(list(zip(*self.matrix)))


def _maximal_orderings(M: List[List[int]]):
    """All (row order, column order) pairs giving the lexicographically
    largest matrix obtainable from ``M`` by permuting rows and columns."""
    nr = len(M)
    nc = len(M[0])
    # a state is (rows used so far, column blocks); blocks are tuples of column
    # indices whose relative order is still free
    states = {((), ((tuple(range(nc))),))}
    for _ in range(nr):
        best = None
        nxt = []
        for rows, blocks in states:
            used = set(rows)
            for r in range(nr):
                if r in used:
                    continue
                row = M[r]
                vec = []
                for b in blocks:
                    vec.extend(sorted((row[c] for c in b), reverse=True))
                if best is None or vec > best:
                    best = vec
                    nxt = [(rows, blocks, r)]
                elif vec == best:
                    nxt.append((rows, blocks, r))
        states = set()
        for rows, blocks, r in nxt:
            row = M[r]
            nb = []
            for b in blocks:
                if len(b) == 1:
                    nb.append(b)
                    continue
                vals = sorted({row[c] for c in b}, reverse=True)
                for v in vals:
                    nb.append(tuple(c for c in b if row[c] == v))
            states.add((rows + (r,), tuple(nb)))
    return [(rows, tuple(b[0] for b in blocks)) for rows, blocks in states]


def _encode(mat) -> bytes:
    return ";".join(",".join(map(str, row)) for row in mat).encode()


def _normal_form(P: Polytope) -> NormalForm:
    if not P.is_lattice:
        raise ValueError("normal form needs a lattice polytope")
    orders = _maximal_orderings(P.pairing_matrix())
    best = None
    seen = set()
    for _, cols in orders:
        if cols in seen:
            continue
        seen.add(cols)
        V = [[P.vertices[j][i] for j in cols] for i in range(P.dim)]
        H, _ = intlin.hnf(V)
        H = tuple(tuple(r) for r in H)
        if best is None or H < best:
            best = H
    key = f"{P.dim}:{len(P.vertices)}|".encode() + _encode(best)
    return NormalForm(best, key)


def normal_form(P: Polytope) -> NormalForm:
    return P.normal_form()


def lattice_automorphisms(P: Polytope) -> List[List[List[int]]]:
    """All integer matrices ``A`` with ``A P = P``."""
    orders = _maximal_orderings(P.pairing_matrix())
    cols0 = orders[0][1]
    n = P.dim
    V = P.vertices
    basis = []
    for j in cols0:
        if intlin.rank([V[k] for k in basis + [j]]) == len(basis) + 1:
            basis.append(j)
            if len(basis) == n:
                break
    B = [V[j] for j in basis]  # rows are basis vertices
    pos = {c: i for i, c in enumerate(cols0)}
    vset = set(V)
    found = {}
    for _, cols in orders:
        # the vertex in position pos[j] of this ordering is the image of j
        images = [V[cols[pos[j]]] for j in basis]
        # solve A b_k = image_k for all k, i.e. B A^T = images
        At = []
        ok = True
        for i in range(n):
            col = intlin.solve_left(intlin.transpose(B), [img[i] for img in images])
            if col is None:
                ok = False
                break
            At.append(col)
        if not ok:
            continue
        A = At  # row i of A
        if all(tuple(intlin.dot(row, v) for row in A) in vset for v in V):
            found[tuple(map(tuple, A))] = A
    return list(found.values())


def automorphism_order(P: Polytope) -> int:
    return len(lattice_automorphisms(P))


# --------------------------------------------------------------------------
# monomials


def monomial_exponents(Delta: Polytope, DeltaStar: Polytope) -> List[List[int]]:
    """``<v_k, x> + 1`` over lattice points ``x`` of Delta and nonzero lattice
    points ``v_k`` of DeltaStar."""
    if not (Delta.is_reflexive() and DeltaStar.is_reflexive()):
        raise NotReflexivePair("both polytopes must be reflexive")
    if set(Delta.dual().vertices) != set(DeltaStar.vertices):
        raise NotReflexivePair("polytopes are not dual to each other")
    zero = (0,) * DeltaStar.dim
    vs = [v for v in DeltaStar.lattice_points() if v != zero]
    return [[intlin.dot(v, x) + 1 for v in vs] for x in Delta.lattice_points()]


# --------------------------------------------------------------------------
# helpers for sections and sublattices


def subspace_coordinates(points, basis=None):
    """Express points of a linear subspace in a saturated lattice basis.

    Returns ``(basis, coords)``: ``basis`` rows span the integer points of
    the rational span of ``points`` and ``coords[i] @ basis == points[i]``.
    """
    pts = [tuple(p) for p in points]
    if basis is None:
        basis = intlin.saturate([p for p in pts if any(p)])
        basis, _ = intlin.hnf(basis)
        basis = [r for r in basis if any(r)]
    coords = [intlin.solve_left(basis, p) for p in pts]
    if any(c is None for c in coords):
        raise ValueError("points do not lie in the lattice spanned by the basis")
    return basis, coords


def random_unimodular(n: int, rng, steps: int = 12, size: int = 2) -> List[List[int]]:
    """Random element of GL(n, Z) built from elementary operations."""
    A = intlin.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        k = rng.randint(-size, size)
        if i != j and k:
            A[i] = [a + k * b for a, b in zip(A[i], A[j])]
        if rng.random() < 0.3:
            A[i] = [-a for a in A[i]]
        if rng.random() < 0.3 and n > 1:
            A[i], A[j] = A[j], A[i]
    return A
