import random
from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from refpoly import Degenerate, NonIntegerVPM, NoInteriorOrigin, hull, vpm
from refpoly.polytope import (automorphism_order, has_integer_vpm, monomial_exponents,
                              random_unimodular)
from refpoly.lattices import enumerate_lattices, reflexive_on_lattice
from refpoly.fibration import reflexive_sections
from refpoly.hodge import hodge_numbers

CUBE = hull(list(product([-1, 1], repeat=3)))
OCTAHEDRON = hull([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])


def point_clouds(dim):
    pt = st.tuples(*[st.integers(-4, 4)] * dim)
    return st.lists(pt, min_size=dim + 1, max_size=12, unique=True)


def brute_lattice_points(pts):
    """Box scan against scipy's floating point facets."""
    pts = np.array(pts)
    h = ConvexHull(pts)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    grid = np.array(list(product(*[range(a, b + 1) for a, b in zip(lo, hi)])))
    inside = np.all(grid @ h.equations[:, :-1].T + h.equations[:, -1] <= 1e-9, axis=1)
    return {tuple(int(x) for x in p) for p in grid[inside]}


@given(point_clouds(3))
@settings(max_examples=80, deadline=None)
def test_hull_vertices_match_scipy(pts):
    arr = np.array(pts)
    if np.linalg.matrix_rank(arr[1:] - arr[0]) < 3:
        with pytest.raises(Degenerate):
            hull(pts)
        return
    P = hull(pts)
    ref = ConvexHull(arr)
    assert set(P.vertices) == {tuple(int(x) for x in arr[i]) for i in ref.vertices}
    assert set(P.lattice_points()) == brute_lattice_points(pts)
    assert P.face_lattice().euler_ok()


@given(point_clouds(2))
@settings(max_examples=60, deadline=None)
def test_polygon_points(pts):
    arr = np.array(pts)
    if np.linalg.matrix_rank(arr[1:] - arr[0]) < 2:
        return
    P = hull(pts)
    assert set(P.lattice_points()) == brute_lattice_points(pts)
    assert len(P.vertices) == len(P.facets)


def test_cube_and_octahedron():
    assert CUBE.is_reflexive() and OCTAHEDRON.is_reflexive()
    assert CUBE.dual() == OCTAHEDRON
    assert len(CUBE.lattice_points()) == 27 and len(OCTAHEDRON.lattice_points()) == 7
    assert CUBE.face_lattice().f_vector() == [8, 12, 6]
    assert automorphism_order(CUBE) == 48


def test_rational_dual_and_vpm():
    P = hull([(2, 0), (0, 2), (-2, -2)])
    assert not P.is_reflexive()
    D = P.dual()
    assert not D.is_lattice
    assert D.dual() == P
    assert has_integer_vpm(P)
    Q = hull([(1, 0), (0, 1), (-1, -2)])
    with pytest.raises(NoInteriorOrigin):
        vpm(hull([(0, 0), (1, 0), (0, 1)]))
    assert not has_integer_vpm(hull([(3, 0), (0, 1), (-1, -1)]))
    with pytest.raises(NonIntegerVPM):
        vpm(hull([(3, 0), (0, 1), (-1, -1)]))
    assert set(Q.lattice_points()) == {(-1, -2), (0, -1), (0, 0), (0, 1), (1, 0)}


def test_rational_polytope_lattice_points():
    D = hull([(2, 0), (0, 2), (-2, -2)]).dual()
    expected = {p for p in product(range(-3, 4), repeat=2) if D.contains(p)}
    assert set(D.lattice_points()) == expected


@pytest.mark.parametrize("P", [CUBE, OCTAHEDRON, hull([(1, 0), (0, 1), (-1, -1)])])
def test_normal_form_invariance(P):
    rng = random.Random(7)
    key = P.normal_form().key
    for _ in range(50):
        U = random_unimodular(P.dim, rng)
        assert P.transform(U).normal_form().key == key


def test_normal_form_separates():
    assert CUBE.normal_form().key != OCTAHEDRON.normal_form().key
    a = hull([(1, 0), (0, 1), (-1, -1)])
    b = hull([(1, 0), (0, 1), (-1, 0), (0, -1)])
    assert a.normal_form().key != b.normal_form().key
    assert a.normal_form().polytope().normal_form().key == a.normal_form().key


def test_monomial_exponents():
    M = monomial_exponents(OCTAHEDRON, CUBE)
    assert len(M) == 7 and len(M[0]) == 26
    assert min(min(r) for r in M) == 0


def twenty_four_cell():
    pts = set()
    for s in product([1, -1], repeat=2):
        pts.update(permutations([s[0], s[1], 0, 0]))
    P = hull(sorted(pts))
    real = [r for r in enumerate_lattices(P) if reflexive_on_lattice(r)]
    assert len(real) == 1
    return P, real[0].polytope()


def test_twenty_four_cell():
    P, Q = twenty_four_cell()
    assert len(P.vertices) == 24 and not P.is_reflexive()
    assert Q.is_reflexive() and len(Q.vertices) == 24
    assert Q.normal_form().key == Q.dual().normal_form().key
    assert hodge_numbers(Q).h == [20, 20]
    assert automorphism_order(Q) == 1152
    cubocta = [f.fiber for f in reflexive_sections(Q.dual(), 3) if len(f.fiber.vertices) == 12]
    assert cubocta and all(automorphism_order(F) == 48 for F in cubocta)
