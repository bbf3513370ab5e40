from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from hallcrystal import modp
from hallcrystal.scalars import gaussian_binomial_eval


def test_rref_identity():
    R, pivots = modp.rref([[1, 0], [0, 1]], 5)
    assert R == [[1, 0], [0, 1]]
    assert pivots == [0, 1]


def test_rref_reduces():
    R, pivots = modp.rref([[2, 4], [1, 2]], 5)
    assert R == [[1, 2]]
    assert pivots == [0]


def test_rank_and_kernel():
    A = [[1, 2, 3], [2, 4, 6]]
    assert modp.rank(A, 7) == 1
    ker = modp.kernel_basis(A, 7)
    assert len(ker) == 2
    for v in ker:
        assert modp.mat_vec(A, v, 7) == (0, 0)


def test_solve():
    A = [[1, 1], [0, 1]]
    x = modp.solve(A, [3, 2], 5)
    assert modp.mat_vec(A, x, 5) == (3, 2)
    assert modp.solve([[1, 0], [1, 0]], [1, 2], 5) is None


def test_inverse():
    A = [[1, 1], [0, 1]]
    inv = modp.inverse(A, 7)
    assert modp.mat_mul(A, inv, 7) == modp.identity(2)


def test_coordinates_in():
    basis = [(1, 0, 1), (0, 1, 0)]
    coords = modp.coordinates_in(basis, (2, 3, 2), 5)
    assert coords == (2, 3)
    assert modp.coordinates_in(basis, (0, 0, 1), 5) is None


@given(st.sampled_from([2, 3, 5]), st.integers(0, 4), st.integers(0, 4))
def test_subspace_counts_match_gaussian_binomials(p, n, k):
    count = sum(1 for _ in modp.iter_subspaces(n, k, p))
    assert count == gaussian_binomial_eval(n, k, p)


def test_subspaces_are_canonical_and_distinct():
    seen = set()
    for basis in modp.iter_subspaces(3, 2, 2):
        R, _ = modp.row_span([list(r) for r in basis], 2)
        key = tuple(tuple(r) for r in R)
        assert key not in seen
        seen.add(key)
    assert len(seen) == 7


def test_subspaces_containing():
    base = [(1, 0, 0)]
    found = list(modp.iter_subspaces_containing(3, 2, base, 2))
    # planes through a fixed line in F_2^3: (8-2)/(4-2) = 3
    assert len(found) == 3
    for rows in found:
        R, piv = modp.row_span([list(r) for r in rows], 2)
        assert len(R) == 2
        assert modp.in_span(R, piv, (1, 0, 0), 2)


def test_mat_pow():
    N = [[0, 1], [0, 0]]
    assert modp.mat_pow(N, 2, 5) == [[0, 0], [0, 0]]
    assert modp.mat_pow(N, 0, 5) == modp.identity(2)


def test_block_diag():
    out = modp.block_diag([[[1]], [[2, 0], [0, 3]]])
    assert out == [[1, 0, 0], [0, 2, 0], [0, 0, 3]]


def test_random_invertible_is_invertible():
    import random

    rng = random.Random(11)
    for _ in range(5):
        A = modp.random_invertible(rng, 3, 5)
        assert modp.rank(A, 5) == 3
