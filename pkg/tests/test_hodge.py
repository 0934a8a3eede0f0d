import pytest

from refpoly import (NotReflexive, WeightSystem, WrongDimension, delta_of_q, enumerate_lattices,
                     hodge_numbers, hull, mirror_check, picard)
from refpoly.hodge import k3_edge_correction


def test_quintic():
    D = delta_of_q(WeightSystem((1, 1, 1, 1, 1)))
    h = hodge_numbers(D)
    assert (h.h11, h.h12, h.chi) == (1, 101, -200)
    assert hodge_numbers(D.dual()).h == [101, 1]
    assert mirror_check(D)


def test_quartic_picard_and_lattice_mirror():
    D = delta_of_q(WeightSystem((1, 1, 1, 1)))
    assert picard(D) == 1 and picard(D.dual()) == 19
    by_index = {r.index: r for r in enumerate_lattices(D)}
    Q = by_index[16].polytope()
    assert picard(Q) == 19 and picard(Q.dual()) == 1


@pytest.mark.parametrize("w", [(1, 1, 1, 1), (1, 1, 4, 6), (1, 1, 1, 2), (1, 2, 3, 6)])
def test_k3_picard_sum(w):
    D = delta_of_q(WeightSystem(w))
    assert hodge_numbers(D).h11 == 20
    assert picard(D) + picard(D.dual()) - k3_edge_correction(D) == 20


def test_errors():
    with pytest.raises(NotReflexive):
        hodge_numbers(hull([(2, 0), (0, 2), (-2, -2)]))
    with pytest.raises(WrongDimension):
        hodge_numbers(hull([(1, 0), (0, 1), (-1, -1)]))


def test_fivefold_mirror():
    D = delta_of_q(WeightSystem((1, 1, 1, 1, 1, 1)))
    h = hodge_numbers(D).h
    assert h[0] == 1 and h == hodge_numbers(D.dual()).h[::-1]
