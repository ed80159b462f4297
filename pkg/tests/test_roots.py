import itertools

import pytest

from gorbit.errors import NonIntegerResult
from gorbit.roots import EXCEPTIONAL_DIMS, algebra_dimension, positive_roots, weyl_dimension


@pytest.mark.parametrize("family,rank,weight,dim", [
    ("A", 2, (1, 1), 8), ("A", 2, (1, 0), 3), ("B", 2, (0, 1), 4), ("B", 2, (1, 0), 5),
    ("C", 3, (1, 0, 0), 6), ("C", 3, (2, 0, 0), 21), ("D", 4, (0, 1, 0, 0), 28),
    ("D", 4, (0, 0, 1, 0), 8), ("B", 1, (4,), 5), ("A", 4, (0, 1, 1, 0), 75),
])
def test_weyl_classical(family, rank, weight, dim):
    assert weyl_dimension(family, rank, weight) == dim


@pytest.mark.parametrize("family,rank,weights", [
    ("G", 2, [7, 14]),
    ("F", 4, [26, 273, 1274, 52]),
    ("E", 6, [27, 351, 2925, 351, 27, 78]),
    ("E", 7, [56, 1539, 27664, 365750, 8645, 133, 912]),
])
def test_exceptional_fundamentals(family, rank, weights):
    for i, d in enumerate(weights):
        w = [0] * rank
        w[i] = 1
        assert weyl_dimension(family, rank, w) == d


def test_adjoint_dimension_from_root_count():
    for fam, rank in [("A", 3), ("B", 3), ("C", 4), ("D", 5), ("G", 2), ("F", 4), ("E", 6), ("E", 7), ("E", 8)]:
        assert algebra_dimension(fam, rank) == 2 * len(positive_roots(fam, rank)) + rank
    assert algebra_dimension("E", 8) == EXCEPTIONAL_DIMS["E8"]


def test_spin_oracle_b2():
    # weights of the spin module of so(5) are (+-1/2, +-1/2): four of them
    assert len(list(itertools.product((-0.5, 0.5), repeat=2))) == weyl_dimension("B", 2, (0, 1))


def test_bad_weight_length():
    with pytest.raises((ValueError, NonIntegerResult)):
        weyl_dimension("A", 2, (1, 0, 0))
