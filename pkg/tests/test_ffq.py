import itertools

import pytest
from hypothesis import given, strategies as st

from hallforge import ffq
from hallforge.ffq import CapExceeded, Caps, FqMatrix, Subspace

from oracles import all_subspaces, invertibles


@pytest.mark.parametrize("n,p", [(0, 2), (1, 2), (2, 2), (3, 2), (1, 3), (2, 3), (1, 5), (2, 5)])
def test_gl_order_matches_count_of_invertible_matrices(n, p):
    assert ffq.gl_order(n, p) == len(invertibles(n, p))


@pytest.mark.parametrize("n,k,p", [(2, 1, 2), (3, 1, 2), (3, 2, 2), (4, 2, 2), (2, 1, 3), (3, 1, 3), (2, 1, 5)])
def test_gaussian_binomial_counts_subspaces(n, k, p):
    expected = len(all_subspaces(n, k, p))
    assert ffq.gaussian_binomial(n, k, p) == expected
    assert len(ffq.enumerate_subspaces(n, k, p)) == expected


def test_gaussian_binomial_edges():
    assert ffq.gaussian_binomial(4, 0, 3) == 1
    assert ffq.gaussian_binomial(4, 4, 3) == 1
    assert ffq.gaussian_binomial(4, 5, 3) == 0
    assert ffq.gaussian_binomial(4, -1, 3) == 0
    # [4 choose 2]_2 = 35
    assert ffq.gaussian_binomial(4, 2, 2) == 35


def test_enumerated_subspaces_are_distinct_and_echelon():
    subs = ffq.enumerate_subspaces(3, 2, 3)
    assert len(set(subs)) == len(subs)
    for s in subs:
        assert ffq.rref(s.basis, 3) == s.basis


def test_gl_elements_and_generators():
    els = ffq.gl_elements(2, 3)
    assert len(els) == 48
    # the generators reach the whole group
    reached = {ffq.identity(2)}
    frontier = list(reached)
    while frontier:
        nxt = []
        for m in frontier:
            for g in ffq.gl_generators(2, 3):
                h = ffq.mat_mul(g, m, 2, 3)
                if h not in reached:
                    reached.add(h)
                    nxt.append(h)
        frontier = nxt
    assert reached == set(els)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_primitive_root_generates(p):
    g = ffq.primitive_root(p)
    assert len({pow(g, e, p) for e in range(1, p)}) == p - 1


def test_bad_prime_rejected():
    with pytest.raises(ValueError):
        ffq.gl_order(2, 4)
    with pytest.raises(ValueError):
        FqMatrix.identity(2, 9)


def test_caps():
    caps = Caps({2: 3})
    caps.check(3, 2)
    with pytest.raises(CapExceeded):
        caps.check(4, 2)
    with pytest.raises(CapExceeded, match="exceeds cap"):
        ffq.DEFAULT_CAPS.check(9, 5)


matrices = st.integers(1, 3).flatmap(
    lambda r: st.integers(1, 3).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 4), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@given(matrices)
def test_rref_is_idempotent_and_preserves_row_space(m):
    p = 5
    red = ffq.rref(m, p)
    assert ffq.rref(red, p) == red
    assert Subspace.span(m, len(m[0]), p) == Subspace.span(red, len(m[0]), p)


@given(matrices)
def test_rank_nullity(m):
    p = 5
    cols = len(m[0])
    ker = ffq.nullspace(tuple(map(tuple, m)), cols, p)
    assert ffq.rank_rows(m, p) + len(ker) == cols
    for v in ker:
        assert not any(ffq.mat_vec(m, v, p))
    # row rank equals column rank
    assert ffq.rank_rows(m, p) == ffq.rank_rows(ffq.transpose(tuple(map(tuple, m)), cols), p)


@given(st.sampled_from(ffq.gl_elements(2, 3)), st.sampled_from(ffq.gl_elements(2, 3)))
def test_inverse_and_product(a, b):
    A, B = FqMatrix(2, 2, 3, a), FqMatrix(2, 2, 3, b)
    assert (A @ A.inverse()) == FqMatrix.identity(2, 3)
    assert ((A @ B).inverse()) == B.inverse() @ A.inverse()


def test_singular_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        ffq.mat_inv(((1, 1), (1, 1)), 2)


def test_subspace_containment():
    p = 3
    line = Subspace.span([(1, 2, 0)], 3, p)
    plane = Subspace.span([(1, 0, 0), (0, 1, 0)], 3, p)
    assert line.within(plane)
    assert not plane.within(line)
    assert plane.contains((2, 2, 0)) and not plane.contains((0, 0, 1))
    assert Subspace.zero(3, p).within(line) and line.within(Subspace.full(3, p))


def test_mat_mul_with_empty_inner_dimension():
    assert ffq.mat_mul(((), ()), (), 3, 2) == ((0, 0, 0), (0, 0, 0))
