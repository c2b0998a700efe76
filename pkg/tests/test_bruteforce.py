import random

import pytest

from vertex19.bruteforce import (
    MAX_INTERNAL_EDGES,
    BoundarySpec,
    count_contributing,
    dwbc_boundary,
    f_boundary,
    fbar_boundary,
    partition_bruteforce,
)
from vertex19.errors import DegenerateParameter, TooLarge
from vertex19.fieldcore import make_context, rand_distinct_ints, rat
from vertex19.weights import weight


def test_boundary_builders():
    z2 = dwbc_boundary(2)
    assert (z2.K, z2.L) == (2, 2)
    assert z2.left == (1, 1) and z2.right == (3, 3)
    assert z2.bottom == (1, 1) and z2.top == (3, 3)
    f2 = f_boundary(2)
    assert (f2.K, f2.L) == (3, 2)
    assert f2.right == (2, 2, 3)  # bottom row first
    fb2 = fbar_boundary(2)
    assert fb2.right == (3, 2, 2)
    assert f_boundary(1).right == (2, 2)
    assert fbar_boundary(3).right == (3, 3, 2, 2)


def test_single_cell_is_one_vertex_weight():
    # With one row and one column the boundary forces the unique vertex
    # (west,north,east,south) = (1,3,3,1).
    ctx = make_context("ik", rat(2), (rat(2),))
    for x in (rat(6), rat(10), rat(3, 2)):
        assert partition_bruteforce(ctx, dwbc_boundary(1), [x]) == weight(
            ctx, "d13", x / 2
        )
    assert count_contributing(ctx, dwbc_boundary(1), [rat(6)]) == 1


def test_contributing_configurations_grow():
    ctx = make_context("fz", rat(2), (rat(2), rat(3)))
    n = count_contributing(ctx, dwbc_boundary(2), [rat(5), rat(7)])
    assert n > 1


def test_size_guard():
    ctx = make_context("ik", rat(2), tuple(rat(v) for v in (2, 3, 5, 7)))
    with pytest.raises(TooLarge):
        partition_bruteforce(ctx, f_boundary(4), [rat(v) for v in (11, 13, 17, 19, 23)])
    big = f_boundary(4)
    assert 2 * big.K * big.L - big.K - big.L > MAX_INTERNAL_EDGES


def test_rejects_mismatched_context():
    ctx = make_context("ik", rat(2), (rat(2),))
    with pytest.raises(DegenerateParameter):
        partition_bruteforce(ctx, dwbc_boundary(2), [rat(5), rat(7)])


def test_boundary_spec_validation():
    with pytest.raises(DegenerateParameter):
        BoundarySpec(K=2, L=2, left=(1,), right=(3, 3), bottom=(1, 1), top=(3, 3))
    with pytest.raises(DegenerateParameter):
        BoundarySpec(K=1, L=1, left=(4,), right=(3,), bottom=(1,), top=(3,))
