"""Weight systems, combined weight systems and the polytopes they define.

A combined weight system (CWS) is a small matrix of nonnegative integers: one
row per weight system, one column per coordinate.  Row ``j`` encodes the
linear relation ``sum_i n_i^(j) V_i = 0`` among the vertices ``V_i`` of a
minimal polytope.  The dual side lives in the integer solutions ``x`` of
``sum_i n_i^(j) x_i = 0`` for all ``j``; ``Delta(q)`` is the hull of those with
every ``x_i >= -1``.  We work in coordinates ``c`` with respect to a saturated
basis ``B`` of that solution lattice (``x = c B``), so ``V_i`` is simply the
``i``-th column of ``B``.
"""
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import gcd
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from . import intlin
from .errors import Degenerate, Unsupported
from .polytope import Polytope, hull


class CWS:
    """Combined weight system stored as a tuple of integer weight rows."""

    __slots__ = ("systems", "_key")

    def __init__(self, systems):
        rows = []
        for s in systems:
            s = tuple(int(x) for x in s)
            if any(x < 0 for x in s) or not any(s):
                raise ValueError(f"invalid weight row {s}")
            g = intlin.vector_gcd(s)
            rows.append(tuple(x // g for x in s))
        if not rows:
            raise ValueError("empty weight system")
        k = len(rows[0])
        if any(len(r) != k for r in rows):
            raise ValueError("weight rows differ in length")
        if not all(any(r[i] for r in rows) for i in range(k)):
            raise ValueError("some coordinate carries no weight")
        self.systems = tuple(rows)
        self._key = None

    @property
    def k(self) -> int:
        return len(self.systems[0])

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(sum(r) for r in self.systems)

    @property
    def dim(self) -> int:
        return self.k - len(self.systems)

    def key(self) -> tuple:
        """Canonical form under permutations of coordinates and of systems."""
        if self._key is None:
            best = None
            for order in permutations(range(len(self.systems))):
                rows = [self.systems[j] for j in order]
                cols = sorted(zip(*rows))
                cand = tuple(cols)
                if best is None or cand < best:
                    best = cand
            self._key = best
        return self._key

    def canonical(self) -> "CWS":
        cols = self.key()
        rows = list(zip(*cols))
        return type(self)(rows) if len(rows) == 1 else CWS(rows)

    def __eq__(self, other):
        return isinstance(other, CWS) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"CWS({self.format()})"

    def format(self) -> str:
        return "  ".join(" ".join(map(str, (sum(r),) + r)) for r in self.systems)


class WeightSystem(CWS):
    """A single weight system ``(n_1, ..., n_k)`` with degree ``d = sum n_i``."""

    __slots__ = ()

    def __init__(self, weights):
        if weights and isinstance(weights[0], (tuple, list)):
            (weights,) = weights
        super().__init__([weights])
        if any(x == 0 for x in self.systems[0]):
            raise ValueError("weights must be positive")

    @property
    def weights(self) -> Tuple[int, ...]:
        return self.systems[0]

    @property
    def d(self) -> int:
        return sum(self.weights)

    def canonical(self) -> "WeightSystem":
        return WeightSystem(sorted(self.weights))

    def __repr__(self):
        return f"WeightSystem{self.weights}"


def as_cws(q) -> CWS:
    if isinstance(q, CWS):
        return q
    q = [tuple(r) for r in q] if q and isinstance(q[0], (tuple, list)) else [tuple(q)]
    if len(q) == 1 and all(x > 0 for x in q[0]):
        return WeightSystem(q[0])
    return CWS(q)


# --------------------------------------------------------------------------
# embedding and Delta(q)


class Embedding(NamedTuple):
    """``B``: n x k saturated kernel basis; ``L``: k x n with ``B L = 1``."""
    B: List[List[int]]
    L: List[List[int]]

    def to_x(self, c):
        return tuple(sum(ci * bi for ci, bi in zip(c, col)) for col in zip(*self.B))

    def to_c(self, x):
        return tuple(sum(xi * li for xi, li in zip(x, col)) for col in zip(*self.L))

    def vertices_nabla(self):
        return [tuple(col) for col in zip(*self.B)]


@lru_cache(maxsize=4096)
def _embedding(systems) -> Embedding:
    B = intlin.right_kernel(systems)
    n = len(B)
    H, U = intlin.hnf(intlin.transpose(B))
    if any(H[i][j] != (i == j) for i in range(n) for j in range(n)):
        raise ValueError("kernel basis is not saturated")
    L = intlin.transpose(U[:n])
    return Embedding(B, L)


def embedding(q) -> Embedding:
    return _embedding(as_cws(q).systems)


def affine_points(q) -> List[Tuple[int, ...]]:
    """All ``a >= 0`` with ``sum_i n_i^(j) a_i = d^(j)`` for every system."""
    q = as_cws(q)
    rows = q.systems
    k = q.k
    # the coordinate with the largest weight in some system goes first so the
    # early loops are short
    order = sorted(range(k), key=lambda i: -max(r[i] for r in rows))
    out = []
    rem = list(q.degrees)
    a = [0] * k

    def rec(t):
        if t == k:
            if not any(rem):
                out.append(tuple(a))
            return
        i = order[t]
        wts = [r[i] for r in rows]
        cap = min(rem[j] // w for j, w in enumerate(wts) if w)
        for v in range(cap + 1):
            a[i] = v
            for j, w in enumerate(wts):
                rem[j] -= w * v
            rec(t + 1)
            for j, w in enumerate(wts):
                rem[j] += w * v
        a[i] = 0

    rec(0)
    return out


@lru_cache(maxsize=4096)
def _delta(systems) -> Polytope:
    q = CWS(systems)
    emb = _embedding(systems)
    pts = sorted(emb.to_c(tuple(x - 1 for x in a)) for a in affine_points(q))
    P = hull(pts)
    P._cache["points"] = pts
    return P


def delta_of_q(q) -> Polytope:
    """Delta(q) in coordinates of a basis of the solution lattice."""
    return _delta(as_cws(q).systems)


def has_ip_cws(q) -> bool:
    try:
        return delta_of_q(q).has_ip()
    except Degenerate:
        return False


def nabla_of_q(q) -> Polytope:
    """The minimal polytope spanned by the vertices ``V_i``."""
    return hull(embedding(q).vertices_nabla())


# --------------------------------------------------------------------------
# the point walk for single weight systems


def _span_key(rows):
    sat = intlin.saturate([list(r) for r in rows])
    H, _ = intlin.hnf(sat)
    return tuple(tuple(r) for r in H if any(r))


def _positive_rays(rows, l):
    """Extreme rays of ``{q >= 0 : rows q = 0}`` (primitive integer vectors)."""
    rays = []
    for mask in range(1, 1 << l):
        zero = [[int(i == j) for j in range(l)] for i in range(l) if not mask >> i & 1]
        ker = intlin.right_kernel([list(r) for r in rows] + zero)
        if len(ker) != 1:
            continue
        v = ker[0]
        if sum(1 for x in v if x) != bin(mask).count("1"):
            continue
        if all(x >= 0 for x in v):
            rays.append(tuple(v))
        elif all(x <= 0 for x in v):
            rays.append(tuple(-x for x in v))
    return rays


def _positive_solution(rows, l) -> Optional[Tuple[int, ...]]:
    """A strictly positive integer ``q`` with ``rows q = 0``, or None."""
    if not rows:
        return tuple([1] * l)
    rays = _positive_rays(rows, l)
    total = [sum(r[i] for r in rays) for i in range(l)]
    if not all(total):
        return None
    return tuple(intlin.primitive(total))


def _node_equation(rows, l) -> Optional[Tuple[int, ...]]:
    """Barycenter of the extremal weight systems compatible with ``rows``.

    The extremal weight systems are the extreme rays of the cone of
    nonnegative vectors orthogonal to all rows, each normalized to sum 1.
    With no rows they are the unit vectors, giving (1, ..., 1).
    """
    if not rows:
        return tuple([1] * l)
    rays = _positive_rays(rows, l)
    a = [sum(Fraction(r[i], sum(r)) for r in rays) for i in range(l)]
    if not all(a):
        return None
    den = 1
    for x in a:
        den = den * x.denominator // gcd(den, x.denominator)
    return tuple(intlin.primitive([int(x * den) for x in a]))


def _box_points(a, root: bool):
    l = len(a)
    total = sum(a)
    ranges = []
    for j in range(l):
        rest = total - a[j]
        ub = -((-rest) // a[j]) - 1  # largest x_j with a_j x_j < rest
        ranges.append(np.arange(-1, ub + 1))
    grids = np.meshgrid(*ranges, indexing="ij")
    X = np.stack([g.ravel() for g in grids], axis=1)
    X = X[X @ np.array(a) < 0]
    if root:
        X = X[np.all(X[:, :-1] >= X[:, 1:], axis=1)]
    # deterministic order: by coordinate sum, then lex
    order = np.lexsort(tuple(X[:, j] for j in range(l - 1, -1, -1)) + (X.sum(axis=1),))
    return [tuple(int(v) for v in row) for row in X[order]]


def enumerate_single_ws(l: int, mode: str = "ip") -> List[WeightSystem]:
    """Weight systems with ``l`` weights found by the point walk.

    Starting from the point set {0} with equation (1, ..., 1), each node adds
    an integer point ``x`` with all ``x_i >= -1`` and ``a . x < 0`` for the
    current equation ``a``, provided a positive weight vector orthogonal to
    all chosen points still exists.  The equation of a node is the barycenter
    of the extremal weight systems orthogonal to its points, and every
    equation met on the way is a candidate.  ``mode="ip"`` keeps only candidates with the IP property.
    """
    if l < 2 or l > 5:
        raise Unsupported(f"weight systems with {l} weights are not supported")
    if mode not in ("candidates", "ip"):
        raise ValueError(mode)
    found = set()
    seen = set()
    stack = [()]
    while stack:
        S = stack.pop()
        key = _span_key(S) if S else ()
        if key in seen:
            continue
        seen.add(key)
        a = _node_equation(S, l)
        if a is None:
            continue
        found.add(tuple(sorted(a)))
        if len(key) == l - 1:
            continue
        children = []
        for x in _box_points(a, root=not S):
            rows = S + (x,)
            if _positive_solution(rows, l) is not None:
                children.append(rows)
        stack.extend(reversed(children))
    out = sorted(found, key=lambda w: (sum(w), w))
    if mode == "ip":
        out = [w for w in out if has_ip_cws(WeightSystem(w))]
    return [WeightSystem(w) for w in out]


# --------------------------------------------------------------------------
# combined weight systems from simplex structures

# Each structure lists the coordinate sets of its simplices.
_STRUCTURES = {
    1: [[[0, 1]]],
    2: [[[0, 1, 2]], [[0, 1], [2, 3]]],
    3: [
        [[0, 1, 2, 3]],
        [[0, 1, 2], [3, 4]],
        [[0, 1, 2], [0, 3, 4]],
        [[0, 1], [2, 3], [4, 5]],
    ],
}

STRUCTURE_NAMES_4 = [
    "single", "two_tetrahedra", "tetrahedron_triangle", "two_triangles",
    "three_triangles", "with_segment",
]


def structures(n: int) -> Dict[str, list]:
    """Simplex structures of minimal polytopes in dimension ``n`` (n <= 4)."""
    if n <= 3:
        return {str(i): s for i, s in enumerate(_STRUCTURES[n])}
    out = {
        "single": [[0, 1, 2, 3, 4]],
        "two_tetrahedra": [[0, 1, 2, 3], [0, 1, 4, 5]],
        "tetrahedron_triangle": [[0, 1, 2, 3], [0, 4, 5]],
        "two_triangles": [[0, 1, 2], [3, 4, 5]],
        "three_triangles": [[0, 1, 2], [0, 3, 4], [0, 5, 6]],
    }
    seg = []
    for s in _STRUCTURES[3]:
        k = max(max(c) for c in s) + 1
        seg.append(s + [[k, k + 1]])
    out["with_segment"] = seg
    return out


def _placements(w: Sequence[int], coords: Sequence[int], shared: Sequence[int], k: int):
    """Distinct ways to lay the weights ``w`` on ``coords``; only the values on
    shared coordinates matter, private ones get the rest in sorted order."""
    seen = set()
    shared = [c for c in coords if c in shared]
    private = [c for c in coords if c not in shared]
    for perm in permutations(range(len(w)), len(shared)):
        vals = tuple(w[i] for i in perm)
        if vals in seen:
            continue
        seen.add(vals)
        rest = sorted(w[i] for i in range(len(w)) if i not in perm)
        row = [0] * k
        for c, v in zip(shared, vals):
            row[c] = v
        for c, v in zip(private, rest):
            row[c] = v
        yield tuple(row)


def cws_from_structure(structure, ip_lists: Dict[int, List[WeightSystem]]) -> List[CWS]:
    """All CWS filling ``structure`` with IP weight systems, deduplicated
    (not yet filtered by the IP property of the combination)."""
    if len(structure) == 1:
        return [ws.canonical() for ws in ip_lists[len(structure[0])]]
    k = max(max(c) for c in structure) + 1
    count = {}
    for cs in structure:
        for c in cs:
            count[c] = count.get(c, 0) + 1
    shared = {c for c, m in count.items() if m > 1}
    options = []
    for cs in structure:
        rows = []
        for ws in ip_lists[len(cs)]:
            rows.extend(_placements(ws.weights, cs, shared, k))
        options.append(rows)
    out = {}
    for combo in product(*options):
        q = CWS(combo)
        out.setdefault(q.key(), q)
    return [CWS(list(zip(*key))) for key in sorted(out)]


def enumerate_cws(n: int, allow_long: bool = False, progress=None) -> List[CWS]:
    """All IP CWS in dimension ``n``: single systems with ``n+1`` weights and
    every IP combination over the simplex structures for ``n``."""
    if n < 1 or n > 4:
        raise Unsupported(f"dimension {n} is not supported")
    if n == 4 and not allow_long:
        raise Unsupported("dimension 4 needs allow_long=True (hours of runtime)")
    return [q for qs in enumerate_cws_by_structure(n, progress=progress).values() for q in qs]


def enumerate_cws_by_structure(n: int, progress=None) -> Dict[str, List[CWS]]:
    ip_lists = {}
    for l in range(2, n + 2):
        ip_lists[l] = enumerate_single_ws(l, "ip")
    out = {}
    for name, struct_list in structures(n).items():
        if isinstance(struct_list[0][0], int):
            struct_list = [struct_list]
        qs = {}
        for s in struct_list:
            for q in cws_from_structure(s, ip_lists):
                if q.key() not in qs and has_ip_cws(q):
                    qs[q.key()] = q
                if progress:
                    progress(name, len(qs))
        out[name] = [qs[k] for k in sorted(qs)]
    return out


# --------------------------------------------------------------------------
# minimality


class Minimality(NamedTuple):
    span: bool
    lp_minimal: bool
    very_minimal: bool
    r_minimal: bool
    dim: int = 3

    @property
    def letter(self) -> str:
        """Strongest flag: r, then l, then s, else '-'.

        Up to dimension 3 lp-minimality implies the span property; above it
        both are shown ("ls") when both hold.
        """
        if self.r_minimal:
            return "r"
        if self.lp_minimal:
            return "ls" if self.span and self.dim > 3 else "l"
        if self.span:
            return "s"
        return "-"


def points_have_ip(points) -> bool:
    pts = list(points)
    if not pts:
        return False
    try:
        return hull(pts).has_ip()
    except Degenerate:
        return False


def minimality_type(q) -> Minimality:
    q = as_cws(q)
    Delta = delta_of_q(q)
    if not Delta.has_ip():
        raise ValueError("minimality is only defined for IP weight systems")
    nabla = nabla_of_q(q)
    dual = Delta.dual()
    dual_vertices = set(dual.vertices)
    span = all(v in dual_vertices for v in nabla.vertices)
    nabla_pts = nabla.lattice_points()
    lp = all(not points_have_ip([p for p in nabla_pts if p != v]) for v in nabla.vertices)
    if dual.is_lattice:
        dual_pts = dual.lattice_points()
        very = all(not points_have_ip([p for p in dual_pts if p != v]) for v in nabla.vertices)
    else:
        very = False
    return Minimality(span, lp, very, very, Delta.dim)


# --------------------------------------------------------------------------
# text format


def parse_cws_line(line: str, nweights: Optional[int] = None) -> CWS:
    """Parse ``d n_1 ... n_k [d' n'_1 ... n'_k ...]``."""
    vals = [int(t) for t in line.split()]
    if not vals:
        raise ValueError("empty weight line")
    if nweights is None:
        fits = [k for k in range(1, len(vals)) if len(vals) % (k + 1) == 0
                and _blocks_consistent(vals, k)]
        if len(fits) != 1:
            raise ValueError("cannot infer the number of weights; use --nweights")
        nweights = fits[0]
    if len(vals) % (nweights + 1):
        raise ValueError(f"line length {len(vals)} is not a multiple of {nweights + 1}")
    if not _blocks_consistent(vals, nweights):
        raise ValueError("degree does not equal the sum of the weights")
    blocks = [vals[i + 1:i + 1 + nweights] for i in range(0, len(vals), nweights + 1)]
    return as_cws(blocks)


def _blocks_consistent(vals, k) -> bool:
    for i in range(0, len(vals), k + 1):
        block = vals[i:i + k + 1]
        if len(block) != k + 1 or block[0] != sum(block[1:]) or any(x < 0 for x in block):
            return False
    return True


def format_cws(q) -> str:
    return as_cws(q).canonical().format()
