from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import GF, Matrix
from sympy.polys.matrices import DomainMatrix

from mimicnet.errors import InputError, SingularMatrixError
from mimicnet.field import (MERSENNE_61, IncrementalBasis, PrimeField, batch_rank,
                            dual_representation, inverse, maximal_independent_columns,
                            random_projection, rank, solve)

PRIMES = [MERSENNE_61, 101, 1_000_003, (1 << 62) - 57]  # m61, small, small, big


def sympy_rank(M, p):
    K = GF(p)
    rows = [[K(int(x)) for x in row] for row in np.asarray(M)]
    r, c = np.asarray(M).shape
    return DomainMatrix(rows, (r, c), K).rank()


@pytest.mark.parametrize("p", PRIMES)
def test_field_axioms_on_random_triples(p):
    f = PrimeField(p)
    rng = np.random.default_rng(1)
    a, b, c = (f.random(rng, 10_000) for _ in range(3))
    pi = lambda x: [int(v) for v in x]
    A, B, C = pi(a), pi(b), pi(c)
    assert pi(f.add(a, b)) == [(x + y) % p for x, y in zip(A, B)]
    assert pi(f.mul(a, b)) == [(x * y) % p for x, y in zip(A, B)]
    assert pi(f.sub(a, b)) == [(x - y) % p for x, y in zip(A, B)]
    assert pi(f.neg(a)) == [(-x) % p for x in A]
    assert pi(f.mul(f.mul(a, b), c)) == pi(f.mul(a, f.mul(b, c)))
    assert pi(f.mul(a, f.add(b, c))) == pi(f.add(f.mul(a, b), f.mul(a, c)))
    for x in A[:200]:
        if x:
            assert x * f.inv(x) % p == 1


def test_field_rejects_composite_and_tiny():
    for p in (1, 2, 4, 91, 1 << 64):
        with pytest.raises(InputError):
            PrimeField(p)


@pytest.mark.parametrize("p", PRIMES)
def test_matmul_and_sum_match_python_ints(p):
    f = PrimeField(p)
    rng = np.random.default_rng(2)
    A, B = f.random(rng, (7, 9)), f.random(rng, (9, 5))
    want = (Matrix(A.astype(object).tolist()) * Matrix(B.astype(object).tolist())).applyfunc(
        lambda x: x % p)
    assert f.matmul(A, B).astype(object).tolist() == want.tolist()
    assert int(f.sum(A)) == sum(int(x) for x in A.flat) % p


def test_rank_trivial_cases():
    f = PrimeField()
    assert rank(f.eye(4), f) == 4
    assert rank(f.zeros((3, 5)), f) == 0
    assert rank(f.zeros((0, 3)), f) == 0


def test_vandermonde_3x5_has_rank_3_and_all_minors_nonzero():
    f = PrimeField()
    pts = [2, 3, 5, 7, 11]
    V = f.array([[x ** i for x in pts] for i in range(3)])
    for cols in combinations(range(5), 3):
        assert Matrix(V[:, cols].astype(object).tolist()).det() % f.p != 0
    assert rank(V, f) == 3


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
def test_rank_matches_sympy(p, data):
    f = PrimeField(p)
    r = data.draw(st.integers(1, 6))
    c = data.draw(st.integers(1, 7))
    k = data.draw(st.integers(0, min(r, c)))
    seed = data.draw(st.integers(0, 2**32))
    rng = np.random.default_rng(seed)
    # product of random factors: rank k with high probability, often deficient
    M = f.matmul(f.random(rng, (r, k)), f.random(rng, (k, c))) if k else f.zeros((r, c))
    if data.draw(st.booleans()):
        M[:, 0] = 0
    want = sympy_rank(M, p)
    assert rank(M, f) == want
    assert rank(M.T, f) == want
    assert int(batch_rank(M[None], f)[0]) == want


@pytest.mark.parametrize("p", [MERSENNE_61, 101])
def test_batch_rank_on_a_stack(p):
    f = PrimeField(p)
    rng = np.random.default_rng(3)
    stack = f.random(rng, (40, 4, 4))
    stack[::3, 2] = stack[::3, 1]  # force some deficient members
    stack[::5] = 0
    got = batch_rank(stack, f)
    assert [int(x) for x in got] == [sympy_rank(M, p) for M in stack]


def test_maximal_independent_columns_examples():
    f = PrimeField()
    assert maximal_independent_columns(f.eye(4), f) == [0, 1, 2, 3]
    M = f.array([[1, 1, 0], [2, 2, 1]])
    assert maximal_independent_columns(M, f) == [0, 2]


def test_maximal_independent_columns_random_6x10_is_deterministic():
    f = PrimeField()
    M = f.random(np.random.default_rng(4), (6, 10))
    cols = maximal_independent_columns(M, f)
    assert len(cols) == 6 == rank(M, f)
    assert rank(M[:, cols], f) == 6
    assert maximal_independent_columns(M.copy(), f) == cols


@given(seed=st.integers(0, 2**32), r=st.integers(1, 5), c=st.integers(1, 8))
def test_maximal_columns_are_a_basis(seed, r, c):
    f = PrimeField(101)
    rng = np.random.default_rng(seed)
    M = f.matmul(f.random(rng, (r, 2)), f.random(rng, (2, c)))
    cols = maximal_independent_columns(M, f)
    assert rank(M[:, cols], f) == len(cols) == rank(M, f)
    for j in set(range(c)) - set(cols):
        assert rank(M[:, cols + [j]], f) == len(cols)


def test_incremental_basis_agrees_with_rank():
    f = PrimeField(101)
    rng = np.random.default_rng(5)
    vecs = f.matmul(f.random(rng, (8, 3)), f.random(rng, (3, 6)))  # 8 vectors spanning rank 3
    basis = IncrementalBasis(6, f)
    taken = []
    for i, v in enumerate(vecs):
        before = rank(np.array(taken), f) if taken else 0
        grew = basis.add(v)
        if grew:
            taken.append(v)
        assert grew == (rank(np.array(taken + ([] if grew else [v])), f) > before)
    assert len(basis) == 3


@pytest.mark.parametrize("p", PRIMES)
def test_solve_and_inverse(p):
    f = PrimeField(p)
    rng = np.random.default_rng(6)
    A = f.random(rng, (5, 5))
    Ainv = inverse(A, f)
    assert np.array_equal(f.matmul(A, Ainv).astype(object), f.eye(5).astype(object))
    B = f.random(rng, (5, 3))
    assert np.array_equal(f.matmul(A, solve(A, B, f)).astype(object), B.astype(object))
    A[4] = A[0]
    with pytest.raises(SingularMatrixError):
        inverse(A, f)


def test_dual_of_identity_block():
    f = PrimeField()
    M = np.concatenate([f.eye(2), f.zeros((2, 2))], axis=1)
    D = dual_representation(M, f)
    assert np.array_equal(D, np.concatenate([f.zeros((2, 2)), f.eye(2)], axis=1))


def independent_sets(M, f, n):
    return {X for r in range(n + 1) for X in combinations(range(n), r)
            if rank(M[:, list(X)], f) == len(X)}


def test_dual_of_u12_is_u12():
    f = PrimeField(101)
    M = f.array([[1, 1]])
    D = dual_representation(M, f)
    assert [int(x) for x in D.ravel()] == [100, 1]
    assert independent_sets(M, f, 2) == independent_sets(D, f, 2) == {(), (0,), (1,)}


def test_dual_of_random_3x7_swaps_bases_with_complements():
    f = PrimeField()
    rng = np.random.default_rng(7)
    M = np.concatenate([f.eye(3), f.random(rng, (3, 4))], axis=1)
    D = dual_representation(M, f)
    assert rank(D, f) == 4
    n = 7
    for X in combinations(range(n), 3):
        rest = [j for j in range(n) if j not in X]
        assert (rank(M[:, list(X)], f) == 3) == (rank(D[:, rest], f) == 4)


def test_dual_requires_standard_form():
    f = PrimeField()
    with pytest.raises(InputError):
        dual_representation(f.array([[2, 1, 0], [0, 1, 1]]), f)


def test_random_projection_examples():
    f = PrimeField()
    rng = np.random.default_rng(8)
    P = random_projection(f.eye(4), 2, rng, f)
    assert P.shape == (2, 4)
    for X in combinations(range(4), 2):
        assert rank(P[:, list(X)], f) == 2
    for X in combinations(range(4), 3):
        assert rank(P[:, list(X)], f) == 2
    M = f.matmul(f.random(rng, (5, 3)), f.random(rng, (3, 6)))
    assert rank(random_projection(M, 2, rng, f), f) == 2
    Q = random_projection(M, 5, rng, f)
    assert independent_sets(Q, f, 6) == independent_sets(M, f, 6)
