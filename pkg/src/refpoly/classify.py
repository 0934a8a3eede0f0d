"""Enumeration of reflexive polytopes by shrinking maximal ones.

Every reflexive polytope lies inside ``Delta(q)`` for some very minimal
combined weight system ``q`` on a suitable lattice.  Starting from those
maximal polytopes we repeatedly shrink them and keep every reflexive
polytope we meet.  Polytopes are identified by their normal form.

The store keeps an append-only log so an interrupted run can be resumed:
each record is a tag byte followed by length-prefixed byte strings.
"""
import os
import struct
import threading
from collections import deque
from itertools import combinations
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import Degenerate, NonIntegerVPM, Unsupported
from .lattices import enumerate_lattices
from .polytope import Polytope, hull, vpm
from .weights import CWS, delta_of_q, enumerate_cws, minimality_type

_ADD = b"A"
_DONE = b"X"
_MID = b"I"  # non-reflexive intermediate, expanded but not counted
_EDGE = b"E"  # inclusion: larger, smaller
_LATTICE_EDGE = b"L"  # same polytope on another lattice
_TWO_FIELDS = (_ADD, _EDGE, _LATTICE_EDGE)
_LEN = struct.Struct(">I")


def _pack(*fields: bytes) -> bytes:
    return b"".join(_LEN.pack(len(f)) + f for f in fields)


class DedupStore:
    """Set of normal-form keys with an optional append-only log.

    ``insert`` is atomic under a lock, so worker threads may share a store.
    Records reach the disk every ``fsync_every`` writes and on ``flush``.
    """

    def __init__(self, path: Optional[str] = None, fsync_every: int = 256):
        self.path = path
        self.fsync_every = fsync_every
        self.keys: Dict[bytes, Optional[bytes]] = {}  # key -> witness key
        self.done = set()
        self.intermediates = set()
        self.edges: List[Tuple[bytes, bytes]] = []
        self.lattice_edges: List[Tuple[bytes, bytes]] = []
        self.found = 0
        self.processed = 0
        self._lock = threading.Lock()
        self._fh = None
        self._pending = 0
        if path is not None:
            if os.path.exists(path):
                self._replay(path)
            self._fh = open(path, "ab")

    def _replay(self, path):
        with open(path, "rb") as fh:
            data = fh.read()
        pos = 0
        good = 0
        while pos < len(data):
            tag = data[pos:pos + 1]
            pos += 1
            nfields = 2 if tag in _TWO_FIELDS else 1
            if tag not in _TWO_FIELDS + (_DONE, _MID):
                break
            fields = []
            for _ in range(nfields):
                if pos + 4 > len(data):
                    break
                (ln,) = _LEN.unpack_from(data, pos)
                pos += 4
                if pos + ln > len(data):
                    break
                fields.append(data[pos:pos + ln])
                pos += ln
            if len(fields) != nfields:
                break
            if tag == _ADD:
                self.keys.setdefault(fields[0], fields[1] or None)
            elif tag == _MID:
                self.intermediates.add(fields[0])
            elif tag == _EDGE:
                self.edges.append(tuple(fields))
            elif tag == _LATTICE_EDGE:
                self.lattice_edges.append(tuple(fields))
            else:
                self.done.add(fields[0])
            good = pos
        if good < len(data):
            # a crash left a partial record behind
            with open(path, "r+b") as fh:
                fh.truncate(good)
        self.found = len(self.keys)
        self.processed = len(self.done)

    def _write(self, rec: bytes):
        if self._fh is None:
            return
        self._fh.write(rec)
        self._pending += 1
        if self._pending >= self.fsync_every:
            self.flush()

    def flush(self):
        if self._fh is not None:
            self._fh.flush()
            os.fsync(self._fh.fileno())
            self._pending = 0

    def close(self):
        if self._fh is not None:
            self.flush()
            self._fh.close()
            self._fh = None

    def __contains__(self, key: bytes) -> bool:
        return key in self.keys

    def __len__(self) -> int:
        return len(self.keys)

    def insert(self, key: bytes, witness: Optional[bytes] = None) -> bool:
        """Add ``key`` if absent; returns True when it was new."""
        with self._lock:
            if key in self.keys:
                return False
            self.keys[key] = witness
            self.found += 1
            self._write(_ADD + _pack(key, witness or b""))
            return True

    def insert_intermediate(self, key: bytes) -> bool:
        with self._lock:
            if key in self.intermediates or key in self.keys:
                return False
            self.intermediates.add(key)
            self._write(_MID + _pack(key))
            return True

    def add_edge(self, a: bytes, b: bytes, lattice: bool = False):
        with self._lock:
            (self.lattice_edges if lattice else self.edges).append((a, b))
            self._write((_LATTICE_EDGE if lattice else _EDGE) + _pack(a, b))

    def mark_done(self, key: bytes):
        with self._lock:
            if key not in self.done:
                self.done.add(key)
                self.processed += 1
                self._write(_DONE + _pack(key))

    def pending(self) -> List[bytes]:
        """Keys that were never expanded, reflexive ones first."""
        rest = sorted(k for k in self.intermediates if k not in self.done)
        return [k for k in self.keys if k not in self.done] + rest


def polytope_from_key(key: bytes) -> Polytope:
    """Rebuild the normal-form polytope encoded in a store key."""
    body = key.split(b"|", 1)[1].decode()
    rows = [[int(x) for x in r.split(",")] for r in body.split(";")]
    return hull(list(zip(*rows)))


# --------------------------------------------------------------------------
# subpolytopes
#
# Two expansion moves are available.  "drop" removes one vertex and takes
# the hull of the remaining lattice points.  "cut" keeps the lattice points
# on the nonnegative side of a half-space <w, x> >= -1, where w is integral
# and its hyperplane passes through n affinely independent lattice points.
# Cuts reach every reflexive subpolytope: if R is reflexive and Q is a
# strictly larger lattice polytope, some vertex w of R* cuts off a lattice
# point of Q, and the cut still contains R.  After a cut the polytope is
# replaced by its lattice closure, which never leaves the parent and fixes
# every reflexive polytope.

MOVES = ("cut", "drop")
FILTERS = ("reflexive", "vpm", "ip")


def _int_det(A: np.ndarray) -> np.ndarray:
    """Exact determinants of a stack of small integer matrices."""
    n = A.shape[-1]
    if n == 1:
        return A[..., 0, 0]
    if n == 2:
        return A[..., 0, 0] * A[..., 1, 1] - A[..., 0, 1] * A[..., 1, 0]
    total = np.zeros(A.shape[:-2], dtype=np.int64)
    for j in range(n):
        minor = np.delete(A[..., 1:, :], j, axis=-1)
        total += (-1) ** j * A[..., 0, j] * _int_det(minor)
    return total


def cut_normals(points) -> np.ndarray:
    """Integral ``w`` with ``<w, x> = -1`` on some n affinely independent
    nonzero points among ``points``; one row per distinct ``w``."""
    P = np.array([p for p in points if any(p)], dtype=np.int64)
    m, n = P.shape
    if m < n:
        return np.zeros((0, n), dtype=np.int64)
    A = P[np.array(list(combinations(range(m), n)))]
    det = _int_det(A)
    ok = det != 0
    A, det = A[ok], det[ok]
    # Cramer: w_j det = det of A with column j replaced by -1
    num = np.empty((len(A), n), dtype=np.int64)
    for j in range(n):
        Aj = A.copy()
        Aj[..., :, j] = -1
        num[:, j] = _int_det(Aj)
    good = np.all(num % det[:, None] == 0, axis=1)
    W = num[good] // det[good][:, None]
    if len(W) == 0:
        return W
    return np.unique(W, axis=0)


def _from_points(pts) -> Optional[Polytope]:
    try:
        Q = hull(pts)
    except Degenerate:
        return None
    if not Q.has_ip():
        return None
    Q._cache["points"] = list(pts)
    return Q


def vertex_drops(P: Polytope) -> List[Polytope]:
    """Hulls of the lattice points of P with one vertex removed (IP only)."""
    pts = P.lattice_points()
    out = []
    for v in P.vertices:
        Q = _from_points([p for p in pts if p != v])
        if Q is not None:
            out.append(Q)
    return out


def cuts(P: Polytope) -> List[Polytope]:
    """Distinct proper cuts of P by lattice half-spaces at distance one
    (IP only)."""
    pts = P.lattice_points()
    W = cut_normals(pts)
    if len(W) == 0:
        return []
    X = np.array(pts, dtype=np.int64)
    keep = (W @ X.T) >= -1
    keep = keep[~np.all(keep, axis=1)]
    out = []
    for row in np.unique(np.packbits(keep, axis=1), axis=0):
        mask = np.unpackbits(row)[:len(pts)]
        Q = _from_points([pts[i] for i in np.nonzero(mask)[0]])
        if Q is not None:
            out.append(Q)
    return out


def lattice_closure(P: Polytope) -> Polytope:
    """Hull of the lattice points of the dual of the lattice hull of the
    dual.  Reflexive polytopes are fixed; in general the result lies between
    P and any polytope containing P that is fixed."""
    if P.is_reflexive():
        return P
    L = hull(P.dual().lattice_points())
    return hull(L.dual().lattice_points())


def _passes(Q: Polytope, through: str) -> bool:
    if not Q.has_ip():
        return False
    if through == "ip":
        return True
    if through == "reflexive":
        return Q.is_reflexive()
    try:
        vpm(Q)
        return True
    except NonIntegerVPM:
        return False


def _children(P: Polytope, move: str, through: str) -> List[Polytope]:
    if move == "cut":
        return [lattice_closure(Q) for Q in cuts(P)]
    return [Q for Q in vertex_drops(P) if _passes(Q, through)]


def _check_move(move, through):
    if move not in MOVES:
        raise ValueError(f"unknown move {move}")
    if through not in FILTERS:
        raise ValueError(f"unknown filter {through}")


def reflexive_subpolytopes(P: Polytope, move: str = "cut",
                           through: str = "ip") -> List[Polytope]:
    """Reflexive polytopes inside P sharing its interior point, P included.

    With ``move="drop"``, ``through`` chooses which intermediate polytopes
    are expanded further: only reflexive ones, those with an integral vertex
    pairing matrix, or every polytope with the origin in its interior.
    """
    _check_move(move, through)
    seen = {P.normal_form().key}
    out = [P] if P.is_reflexive() else []
    queue = deque([P])
    while queue:
        Q = queue.popleft()
        for R in _children(Q, move, through):
            key = R.normal_form().key
            if key in seen:
                continue
            seen.add(key)
            if R.is_reflexive():
                out.append(R)
            queue.append(R)
    return out


# --------------------------------------------------------------------------
# the driver


@dataclass
class ClassificationRun:
    n: int
    seeds: List[CWS]
    store: DedupStore
    seed_keys: List[bytes] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.store)

    @property
    def edges(self) -> List[Tuple[bytes, bytes]]:
        """Inclusions (larger, smaller); the larger may be an intermediate."""
        return self.store.edges

    @property
    def lattice_edges(self) -> List[Tuple[bytes, bytes]]:
        return self.store.lattice_edges


def default_seeds(n: int, allow_huge: bool = False) -> List[CWS]:
    """Very minimal combined weight systems in dimension n."""
    if n not in (2, 3) and not (allow_huge and n == 4):
        raise Unsupported("seeds are enumerated for dimensions 2 and 3")
    return [q for q in enumerate_cws(n, allow_long=allow_huge)
            if minimality_type(q).very_minimal]


def _expand(args) -> List[Tuple[bytes, bool, Optional[List[bytes]]]]:
    """Children of one polytope: (key, reflexive, lattice realizations)."""
    key, move, through, with_lattices = args
    P = polytope_from_key(key)
    out = []
    seen = set()
    for Q in _children(P, move, through):
        k = Q.normal_form().key
        if k in seen:
            continue
        seen.add(k)
        out.append((k, Q.is_reflexive(), None))
    if with_lattices and P.is_reflexive():
        reals = []
        for r in enumerate_lattices(P):
            try:
                R = r.polytope()
            except Degenerate:
                continue
            if R.is_reflexive():
                reals.append(R.normal_form().key)
        out.append((key, True, sorted(set(reals))))
    return out


def classify(n: int, seeds: Optional[Sequence] = None, with_lattices: bool = False,
             jobs: int = 1, move: str = "cut", through: str = "ip", store: Optional[DedupStore] = None,
             progress=None, allow_huge: bool = False) -> ClassificationRun:
    """All reflexive polytopes below the seeds, up to lattice isomorphism.

    Only reflexive classes are counted; non-reflexive intermediates are
    logged separately so that a resumed run still expands them.  Dimension
    4 needs ``allow_huge`` and is only practical from small explicit seeds.
    """
    _check_move(move, through)
    if n not in (2, 3) and not (allow_huge and n == 4):
        raise Unsupported("classification is supported for n = 2 and 3")
    if seeds is None:
        seeds = default_seeds(n, allow_huge)
    seeds = [q if isinstance(q, CWS) else CWS(q) for q in seeds]
    store = store if store is not None else DedupStore()
    run = ClassificationRun(n, seeds, store)
    frontier = deque(store.pending())
    for q in seeds:
        P = delta_of_q(q)
        if P.dim != n or not P.is_reflexive():
            continue
        k = P.normal_form().key
        run.seed_keys.append(k)
        if store.insert(k):
            frontier.append(k)
    pool = ProcessPoolExecutor(jobs) if jobs > 1 else None
    try:
        while frontier:
            batch = [frontier.popleft() for _ in range(min(len(frontier), max(1, 64 * jobs)))]
            args = [(k, move, through, with_lattices) for k in batch]
            results = pool.map(_expand, args, chunksize=4) if pool else map(_expand, args)
            for parent, children in zip(batch, results):
                for k, refl, reals in children:
                    if reals is not None:
                        for r in reals:
                            if r != parent:
                                store.add_edge(parent, r, lattice=True)
                            if store.insert(r, parent):
                                frontier.append(r)
                        continue
                    if refl:
                        store.add_edge(parent, k)
                        if store.insert(k, parent):
                            frontier.append(k)
                    else:
                        store.add_edge(parent, k)
                        if store.insert_intermediate(k):
                            frontier.append(k)
                store.mark_done(parent)
                if progress is not None:
                    progress(store.found, store.processed, len(frontier))
    finally:
        if pool is not None:
            pool.shutdown()
        store.flush()
    return run


def check_r_maximal(P: Polytope) -> bool:
    """True when no larger reflexive polytope contains P.

    This holds exactly when the dual is very minimal: removing any of its
    vertices from its lattice points destroys the interior point.
    """
    D = P.dual()
    pts = D.lattice_points()
    for v in D.vertices:
        rest = [p for p in pts if p != v]
        try:
            if hull(rest).has_ip():
                return False
        except Degenerate:
            continue
    return True


def connectedness_report(run_or_edges, nodes: Optional[Iterable[bytes]] = None):
    """Whether all stored classes lie in one component of the inclusion and
    lattice graph, with a spanning forest as witness.

    Accepts a :class:`ClassificationRun` or an explicit edge list together
    with the node set that must be connected.  Other endpoints (non-reflexive
    intermediates) may appear on paths; since inclusion is transitive such a
    path still links two reflexive classes by inclusion.
    """
    if isinstance(run_or_edges, ClassificationRun):
        run = run_or_edges
        nodes = list(run.store.keys)
        edges = run.edges + run.lattice_edges
    else:
        edges = list(run_or_edges)
        nodes = list(nodes or [])
    required = len(nodes)
    nodes = nodes + sorted({k for e in edges for k in e} - set(nodes))
    index = {k: i for i, k in enumerate(nodes)}
    parent = list(range(len(nodes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    forest = []
    for a, b in edges:
        ra, rb = find(index[a]), find(index[b])
        if ra != rb:
            parent[ra] = rb
            forest.append((a, b))
    roots = {find(i) for i in range(required)}
    return len(roots) <= 1, forest
