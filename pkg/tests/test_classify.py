from itertools import product

import numpy as np
import pytest

from refpoly import (DedupStore, Degenerate, WeightSystem, classify, connectedness_report,
                     delta_of_q, hull)
from refpoly.classify import (check_r_maximal, cut_normals, default_seeds, lattice_closure,
                              polytope_from_key, reflexive_subpolytopes)
from refpoly.errors import Unsupported


class Interrupt(Exception):
    pass


def test_store_roundtrip(tmp_path):
    path = str(tmp_path / "log")
    s = DedupStore(path, fsync_every=1)
    assert s.insert(b"a") and not s.insert(b"a")
    s.insert(b"b", b"a")
    s.insert_intermediate(b"m")
    s.add_edge(b"a", b"b")
    s.mark_done(b"a")
    s.close()
    with open(path, "ab") as fh:
        fh.write(b"A\x00\x00\x00\x09par")  # torn record
    t = DedupStore(path)
    assert len(t) == 2 and t.keys[b"b"] == b"a"
    assert t.edges == [(b"a", b"b")]
    assert t.pending() == [b"b", b"m"]
    t.close()
    assert DedupStore(path).pending() == [b"b", b"m"]


def test_key_roundtrip():
    P = delta_of_q(WeightSystem((1, 1, 2)))
    key = P.normal_form().key
    assert polytope_from_key(key).normal_form().key == key


def brute_cut_normals(points, box=4):
    pts = [p for p in points if any(p)]
    n = len(pts[0])
    out = set()
    for w in product(range(-box, box + 1), repeat=n):
        tight = [p for p in pts if sum(a * b for a, b in zip(w, p)) == -1]
        if len(tight) >= n and np.linalg.matrix_rank(np.array(tight, dtype=float)) == n:
            out.add(w)
    return out


def test_cut_normals_match_brute_force():
    P = delta_of_q(WeightSystem((1, 1, 2)))
    got = {tuple(int(x) for x in w) for w in cut_normals(P.lattice_points())}
    ref = brute_cut_normals(P.lattice_points())
    assert ref <= got
    assert all(max(map(abs, w)) <= 4 for w in got)


def test_lattice_closure_fixes_reflexive():
    P = hull([(1, 0), (0, 1), (-1, -1)])
    assert lattice_closure(P) is P
    Q = hull([(1, 0), (0, 1), (-1, 0), (-1, -1)])
    assert lattice_closure(Q).is_reflexive()


def test_dimension_two(classes2):
    assert classes2.count == 16
    assert connectedness_report(classes2)[0]
    assert all(polytope_from_key(k).is_reflexive() for k in classes2.store.keys)


def test_drop_moves_through_ip_agree_in_dimension_two(classes2):
    run = classify(2, move="drop", through="ip")
    assert set(run.store.keys) == set(classes2.store.keys)


def test_jobs_do_not_change_result(classes2):
    run = classify(2, jobs=2)
    assert set(run.store.keys) == set(classes2.store.keys)


def test_resume_after_interrupt(tmp_path, classes2):
    path = str(tmp_path / "ckpt")
    calls = []

    def stop(found, processed, frontier):
        calls.append(processed)
        if len(calls) == 3:
            raise Interrupt

    store = DedupStore(path, fsync_every=1)
    with pytest.raises(Interrupt):
        classify(2, store=store, progress=stop)
    store.close()
    store = DedupStore(path)
    assert 0 < len(store.done) < 16
    run = classify(2, store=store)
    store.close()
    assert set(run.store.keys) == set(classes2.store.keys)
    assert connectedness_report(run)[0]


def test_seeds_are_r_maximal():
    seeds = default_seeds(2)
    assert len(seeds) == 3
    assert all(check_r_maximal(delta_of_q(q)) for q in seeds)
    assert not check_r_maximal(hull([(1, 0), (0, 1), (-1, -1)]))


@pytest.mark.parametrize("w", [(1, 1, 1), (1, 1, 2)])
def test_subpolytopes_match_subset_search(w):
    P = delta_of_q(WeightSystem(w))
    pts = P.lattice_points()
    ref = set()
    for mask in range(1, 1 << len(pts)):
        sub = [p for i, p in enumerate(pts) if mask >> i & 1]
        if len(sub) < 3:
            continue
        try:
            Q = hull(sub)
        except Degenerate:
            continue
        if Q.is_reflexive():
            ref.add(Q.normal_form().key)
    got = {Q.normal_form().key for Q in reflexive_subpolytopes(P)}
    assert got == ref


def test_gate():
    with pytest.raises(Unsupported):
        classify(4)
    with pytest.raises(ValueError):
        classify(2, move="flip")
